#include "hallubench/llm/gateway.hpp"

#include "hallubench/util/concurrency.hpp"
#include "hallubench/util/error.hpp"
#include "hallubench/util/hashing.hpp"

namespace hallubench::llm {
namespace {

Json request_json(std::string_view op, const Backend& backend, const ChatPrompt& prompt,
                  const GenerationParams& params, int top_k) {
  return Json::array({op, std::string(to_string(backend.kind())), backend.identity(), params.model,
                      params.temperature, params.max_tokens, prompt.system, prompt.user, top_k});
}

}  // namespace

std::string cache_key(std::string_view op, const Backend& backend, const ChatPrompt& prompt,
                      const GenerationParams& params, int top_k) {
  return sha256_hex(request_json(op, backend, prompt, params, top_k).dump());
}

Gateway::Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache)
    : backend_(std::move(backend)), cache_(std::move(cache)) {
  if (!backend_) throw Error(ErrorCode::InvalidArgument, "gateway needs a backend");
}

Json Gateway::cached(const std::string& key, const Json& request, const std::function<Json()>& compute) {
  if (!cache_) {
    ++backend_calls_;
    return compute();
  }
  if (auto hit = cache_->lookup(key)) return *hit;

  std::promise<Json> promise;
  std::shared_future<Json> future;
  bool owner = false;
  {
    std::lock_guard lock(inflight_mutex_);
    if (auto it = inflight_.find(key); it != inflight_.end()) {
      future = it->second;
    } else {
      // Re-check under the lock: another thread may have finished meanwhile.
      if (auto hit = cache_->lookup(key)) return *hit;
      future = promise.get_future().share();
      inflight_.emplace(key, future);
      owner = true;
    }
  }
  if (!owner) return future.get();

  try {
    ++backend_calls_;
    Json value = compute();
    cache_->store(key, request, value);
    promise.set_value(value);
  } catch (...) {
    promise.set_exception(std::current_exception());
  }
  {
    std::lock_guard lock(inflight_mutex_);
    inflight_.erase(key);
  }
  return future.get();
}

std::string Gateway::chat_complete(const ChatPrompt& prompt, const GenerationParams& params) {
  const auto request = request_json("chat", *backend_, prompt, params, 0);
  const auto key = sha256_hex(request.dump());
  return cached(key, request, [&] { return Json(backend_->chat_complete(prompt, params)); }).get<std::string>();
}

std::vector<TokenLogProb> Gateway::first_token_logprobs(const ChatPrompt& prompt, const GenerationParams& params,
                                                        int top_k) {
  if (top_k <= 0) throw Error(ErrorCode::InvalidArgument, "top_k must be positive");
  const auto request = request_json("logprobs", *backend_, prompt, params, top_k);
  const auto key = sha256_hex(request.dump());
  const auto value = cached(key, request, [&] {
    Json list = Json::array();
    for (const auto& t : backend_->first_token_logprobs(prompt, params, top_k)) {
      list.push_back(Json{{"token", t.token}, {"logprob", t.logprob}});
    }
    return list;
  });
  std::vector<TokenLogProb> out;
  for (const auto& entry : value) out.push_back({entry.at("token").get<std::string>(), entry.at("logprob").get<double>()});
  return out;
}

std::vector<std::string> Gateway::chat_complete_batch(const std::vector<ChatPrompt>& prompts,
                                                      const GenerationParams& params) {
  std::vector<std::string> out(prompts.size());
  parallel_for_index(prompts.size(), static_cast<std::size_t>(backend_->max_concurrency()),
                     [&](std::size_t i) { out[i] = chat_complete(prompts[i], params); });
  return out;
}

}  // namespace hallubench::llm
