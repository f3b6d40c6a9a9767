#pragma once

#include <atomic>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hallubench/llm/backend.hpp"
#include "hallubench/llm/cache.hpp"

namespace hallubench::llm {

// SHA-256 over the request tuple. `top_k` is 0 for text completions.
std::string cache_key(std::string_view op, const Backend& backend, const ChatPrompt& prompt,
                      const GenerationParams& params, int top_k = 0);

// Backend plus optional cache. Identical concurrent requests are coalesced so
// each distinct request reaches the backend at most once.
class Gateway {
 public:
  Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache = nullptr);

  std::string chat_complete(const ChatPrompt& prompt, const GenerationParams& params);
  // Throws InvalidArgument for top_k <= 0.
  std::vector<TokenLogProb> first_token_logprobs(const ChatPrompt& prompt, const GenerationParams& params,
                                                 int top_k);

  // Results are in input order; runs up to the backend's max_concurrency.
  std::vector<std::string> chat_complete_batch(const std::vector<ChatPrompt>& prompts,
                                               const GenerationParams& params);

  Backend& backend() noexcept { return *backend_; }
  std::size_t backend_calls() const noexcept { return backend_calls_.load(); }

 private:
  Json cached(const std::string& key, const Json& request, const std::function<Json()>& compute);

  std::shared_ptr<Backend> backend_;
  std::shared_ptr<ResponseCache> cache_;
  std::mutex inflight_mutex_;
  std::map<std::string, std::shared_future<Json>> inflight_;
  std::atomic<std::size_t> backend_calls_{0};
};

}  // namespace hallubench::llm
