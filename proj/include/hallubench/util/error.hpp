#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hallubench {

enum class ErrorCode {
  // generic
  EmptyInput,
  InvalidArgument,
  // SMILES parsing
  UnclosedRing,
  UnbalancedParen,
  UnknownElement,
  MalformedBracketAtom,
  MalformedSmiles,
  // tabular / file input
  MissingColumn,
  FileUnreadable,
  EmptyDataset,
  // remote backends
  NetworkError,
  AuthError,
  RateLimited,
  MalformedResponse,
  LogprobsUnsupported,
  // prediction
  UnknownTask,
  NoCandidateTokens,
  // metrics
  UndefinedAUC,
  LengthMismatch,
  MissingBaseline,
  IncompleteGroup,
  TooFewRaters,
  UnknownCategory,
  OutOfRange,
  // annotation parsing
  NoJsonFound,
  MixedNoHallucination,
  MissingField,
  // orchestration
  ConfigError,
  MissingDescriptions,
  EmptyLedger,
  OutputLocked,
};

enum class ErrorCategory { Config, Data, Network };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category(ErrorCode code) noexcept;

// Process exit status for a failed command: config 2, data 3, network 4.
int exit_code(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace hallubench
