#pragma once

#include <memory>
#include <semaphore>
#include <string>
#include <vector>

#include "hallubench/llm/types.hpp"
#include "hallubench/net/http.hpp"
#include "hallubench/util/io.hpp"

namespace hallubench::llm {

// Shareable across threads.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendKind kind() const noexcept = 0;
  // Distinguishes backends of the same kind in cache keys (endpoint or seed).
  virtual std::string identity() const = 0;
  virtual int max_concurrency() const noexcept = 0;
  virtual std::string chat_complete(const ChatPrompt& prompt, const GenerationParams& params) = 0;
  // Top-k alternatives for the first generated token, most likely first.
  virtual std::vector<TokenLogProb> first_token_logprobs(const ChatPrompt& prompt, const GenerationParams& params,
                                                         int top_k) = 0;
};

// Speaks the OpenAI chat-completions dialect. At most max_concurrency requests
// are in flight at once across all threads.
class OpenAICompatibleBackend final : public Backend {
 public:
  OpenAICompatibleBackend(BackendConfig config, std::shared_ptr<net::HttpTransport> transport,
                          Sleeper sleeper = real_sleeper());

  BackendKind kind() const noexcept override { return BackendKind::OpenAICompatible; }
  std::string identity() const override { return config_.base_url; }
  int max_concurrency() const noexcept override { return config_.max_concurrency; }
  std::string chat_complete(const ChatPrompt& prompt, const GenerationParams& params) override;
  std::vector<TokenLogProb> first_token_logprobs(const ChatPrompt& prompt, const GenerationParams& params,
                                                 int top_k) override;

 private:
  Json post(const Json& body, bool wants_logprobs);

  BackendConfig config_;
  std::shared_ptr<net::HttpTransport> transport_;
  Sleeper sleeper_;
  std::counting_semaphore<> slots_;
};

// Offline stand-in. Every output is a pure function of (seed, model,
// temperature, prompt): task questions get "Yes"/"No", annotator prompts get a
// JSON verdict, anything else gets a templated description.
class MockBackend final : public Backend {
 public:
  explicit MockBackend(std::uint64_t seed, int max_concurrency = 4);

  BackendKind kind() const noexcept override { return BackendKind::Mock; }
  std::string identity() const override;
  int max_concurrency() const noexcept override { return max_concurrency_; }
  std::string chat_complete(const ChatPrompt& prompt, const GenerationParams& params) override;
  // Offers "Yes", " Yes", "No", " no" and "Maybe". The Yes and No variants
  // together carry at most 0.95 of the probability mass.
  std::vector<TokenLogProb> first_token_logprobs(const ChatPrompt& prompt, const GenerationParams& params,
                                                 int top_k) override;

 private:
  std::uint64_t hash(const ChatPrompt& prompt, const GenerationParams& params, std::string_view op) const;

  std::uint64_t seed_;
  int max_concurrency_;
};

std::shared_ptr<Backend> make_backend(const BackendConfig& config, std::shared_ptr<net::HttpTransport> transport,
                                      Sleeper sleeper = real_sleeper());

}  // namespace hallubench::llm
