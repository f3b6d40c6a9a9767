#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "hallubench/llm/backend.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::llm {
namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& slots) : slots_(slots) { slots_.acquire(); }
  ~SlotGuard() { slots_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& slots_;
};

Json request_body(const ChatPrompt& prompt, const GenerationParams& params) {
  return Json{{"model", params.model},
              {"messages", Json::array({Json{{"role", "system"}, {"content", prompt.system}},
                                        Json{{"role", "user"}, {"content", prompt.user}}})},
              {"temperature", params.temperature},
              {"max_tokens", params.max_tokens}};
}

std::string excerpt(const std::string& body) { return body.size() > 300 ? body.substr(0, 300) + "..." : body; }

}  // namespace

OpenAICompatibleBackend::OpenAICompatibleBackend(BackendConfig config, std::shared_ptr<net::HttpTransport> transport,
                                                 Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      slots_(std::max(1, config_.max_concurrency)) {
  config_.validate();
  while (!config_.base_url.empty() && config_.base_url.back() == '/') config_.base_url.pop_back();
}

Json OpenAICompatibleBackend::post(const Json& body, bool wants_logprobs) {
  net::HttpRequest request;
  request.method = "POST";
  request.url = config_.base_url + "/chat/completions";
  request.body = body.dump();
  request.timeout = config_.timeout;
  request.headers["Content-Type"] = "application/json";
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw Error(ErrorCode::AuthError, "environment variable " + config_.api_key_env + " is not set");
    }
    request.headers["Authorization"] = std::string("Bearer ") + key;
  }
  const net::RetryPolicy policy{config_.retry_limit, config_.backoff_base};

  net::HttpResponse response;
  {
    SlotGuard guard(slots_);
    response = net::send_with_retry(*transport_, request, policy, sleeper_);
  }
  if (response.status != 200) {
    if (wants_logprobs && response.status == 400 && to_lower(response.body).find("logprob") != std::string::npos) {
      throw Error(ErrorCode::LogprobsUnsupported, "endpoint rejected logprobs: " + excerpt(response.body));
    }
    throw Error(ErrorCode::NetworkError,
                "HTTP " + std::to_string(response.status) + " from " + request.url + ": " + excerpt(response.body));
  }
  try {
    return Json::parse(response.body);
  } catch (const Json::parse_error&) {
    throw Error(ErrorCode::MalformedResponse, "response is not JSON: " + excerpt(response.body));
  }
}

std::string OpenAICompatibleBackend::chat_complete(const ChatPrompt& prompt, const GenerationParams& params) {
  const auto reply = post(request_body(prompt, params), false);
  try {
    const auto& content = reply.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw Error(ErrorCode::MalformedResponse, "message content is not a string");
    return content.get<std::string>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::MalformedResponse, "missing choices[0].message.content");
  }
}

std::vector<TokenLogProb> OpenAICompatibleBackend::first_token_logprobs(const ChatPrompt& prompt,
                                                                        const GenerationParams& params, int top_k) {
  if (top_k <= 0) throw Error(ErrorCode::InvalidArgument, "top_k must be positive");
  auto body = request_body(prompt, params);
  body["max_tokens"] = 1;
  body["logprobs"] = true;
  body["top_logprobs"] = top_k;
  const auto reply = post(body, true);

  const Json* top = nullptr;
  try {
    const auto& choice = reply.at("choices").at(0);
    if (choice.contains("logprobs") && choice["logprobs"].is_object() && choice["logprobs"].contains("content") &&
        choice["logprobs"]["content"].is_array() && !choice["logprobs"]["content"].empty()) {
      const auto& first = choice["logprobs"]["content"][0];
      if (first.contains("top_logprobs") && first["top_logprobs"].is_array()) top = &first["top_logprobs"];
    }
  } catch (const Json::exception&) {
    throw Error(ErrorCode::MalformedResponse, "missing choices[0]");
  }
  if (top == nullptr) throw Error(ErrorCode::LogprobsUnsupported, "response carries no token logprobs");

  std::vector<TokenLogProb> out;
  for (const auto& entry : *top) {
    if (!entry.contains("token") || !entry["token"].is_string() || !entry.contains("logprob") ||
        !entry["logprob"].is_number()) {
      throw Error(ErrorCode::MalformedResponse, "top_logprobs entry lacks token or logprob");
    }
    const double lp = entry["logprob"].get<double>();
    if (!std::isfinite(lp)) throw Error(ErrorCode::MalformedResponse, "non-finite logprob");
    out.push_back({entry["token"].get<std::string>(), std::min(lp, 0.0)});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.logprob > b.logprob; });
  if (out.size() > static_cast<std::size_t>(top_k)) out.resize(static_cast<std::size_t>(top_k));
  return out;
}

std::shared_ptr<Backend> make_backend(const BackendConfig& config, std::shared_ptr<net::HttpTransport> transport,
                                      Sleeper sleeper) {
  config.validate();
  if (config.kind == BackendKind::Mock) return std::make_shared<MockBackend>(config.seed, config.max_concurrency);
  return std::make_shared<OpenAICompatibleBackend>(config, std::move(transport), std::move(sleeper));
}

}  // namespace hallubench::llm
