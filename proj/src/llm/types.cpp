#include "hallubench/llm/types.hpp"

#include "hallubench/util/error.hpp"
#include "hallubench/util/io.hpp"

namespace hallubench::llm {

std::string_view to_string(BackendKind kind) noexcept {
  return kind == BackendKind::Mock ? "mock" : "openai_compatible";
}

BackendKind parse_backend_kind(std::string_view text) {
  const auto lower = to_lower(text);
  if (lower == "mock") return BackendKind::Mock;
  if (lower == "openai_compatible" || lower == "openai") return BackendKind::OpenAICompatible;
  throw Error(ErrorCode::ConfigError, "unknown backend kind '" + std::string(text) + "'");
}

void BackendConfig::validate() const {
  if (kind == BackendKind::OpenAICompatible && base_url.empty()) {
    throw Error(ErrorCode::ConfigError, "remote backend requires base_url");
  }
  if (max_concurrency <= 0) throw Error(ErrorCode::ConfigError, "max_concurrency must be positive");
  if (retry_limit < 0) throw Error(ErrorCode::ConfigError, "retry_limit must not be negative");
}

}  // namespace hallubench::llm
