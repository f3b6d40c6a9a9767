#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace hallubench::llm {

struct ChatPrompt {
  std::string system;
  std::string user;

  bool operator==(const ChatPrompt&) const = default;
};

struct GenerationParams {
  std::string model;
  double temperature = 0.6;
  int max_tokens = 256;
};

struct TokenLogProb {
  std::string token;
  double logprob = 0.0;  // natural log
};

enum class BackendKind { OpenAICompatible, Mock };

std::string_view to_string(BackendKind kind) noexcept;
BackendKind parse_backend_kind(std::string_view text);

struct BackendConfig {
  BackendKind kind = BackendKind::Mock;
  std::string base_url;     // remote only, e.g. https://api.openai.com/v1
  std::string api_key_env;  // name of the variable holding the key; may be empty
  int max_concurrency = 4;
  int retry_limit = 5;
  std::chrono::milliseconds backoff_base{500};
  std::chrono::milliseconds timeout{120000};
  std::uint64_t seed = 0;  // mock only

  // Throws ConfigError when a remote backend has no base_url or a limit is
  // not positive.
  void validate() const;
};

}  // namespace hallubench::llm
