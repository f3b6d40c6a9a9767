#include "hallubench/util/error.hpp"

namespace hallubench {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnclosedRing: return "UnclosedRing";
    case ErrorCode::UnbalancedParen: return "UnbalancedParen";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::MalformedBracketAtom: return "MalformedBracketAtom";
    case ErrorCode::MalformedSmiles: return "MalformedSmiles";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::FileUnreadable: return "FileUnreadable";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::AuthError: return "AuthError";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::LogprobsUnsupported: return "LogprobsUnsupported";
    case ErrorCode::UnknownTask: return "UnknownTask";
    case ErrorCode::NoCandidateTokens: return "NoCandidateTokens";
    case ErrorCode::UndefinedAUC: return "UndefinedAUC";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingBaseline: return "MissingBaseline";
    case ErrorCode::IncompleteGroup: return "IncompleteGroup";
    case ErrorCode::TooFewRaters: return "TooFewRaters";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoJsonFound: return "NoJsonFound";
    case ErrorCode::MixedNoHallucination: return "MixedNoHallucination";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::MissingDescriptions: return "MissingDescriptions";
    case ErrorCode::EmptyLedger: return "EmptyLedger";
    case ErrorCode::OutputLocked: return "OutputLocked";
  }
  return "Unknown";
}

ErrorCategory category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NetworkError:
    case ErrorCode::AuthError:
    case ErrorCode::RateLimited:
    case ErrorCode::MalformedResponse:
    case ErrorCode::LogprobsUnsupported:
      return ErrorCategory::Network;
    case ErrorCode::ConfigError:
    case ErrorCode::UnknownTask:
    case ErrorCode::InvalidArgument:
    case ErrorCode::OutputLocked:
      return ErrorCategory::Config;
    default:
      return ErrorCategory::Data;
  }
}

int exit_code(ErrorCode code) noexcept {
  switch (category(code)) {
    case ErrorCategory::Config: return 2;
    case ErrorCategory::Data: return 3;
    case ErrorCategory::Network: return 4;
  }
  return 1;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace hallubench
