#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>

#include "hallubench/util/io.hpp"

namespace hallubench::net {

struct HttpRequest {
  std::string method = "GET";
  std::string url;
  std::map<std::string, std::string> headers;
  std::string body;
  std::chrono::milliseconds timeout{120000};
};

struct HttpResponse {
  int status = 0;  // 0: no response (connection failure or timeout)
  std::string body;
  std::map<std::string, std::string> headers;  // names lower-cased
  std::string error;  // transport-level failure text when status == 0
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

// Real network transport (http and https).
std::shared_ptr<HttpTransport> make_http_transport();

struct RetryPolicy {
  int retry_limit = 5;  // extra attempts after the first
  std::chrono::milliseconds backoff_base{500};
  std::chrono::milliseconds backoff_cap{30000};
};

// Backoff before retry number `attempt` (0-based): base * 2^attempt scaled by
// a jitter factor in [1, 1.5) derived from `salt`, capped.
std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int attempt, std::uint64_t salt);

// Sends with retries on 429, 5xx and transport failures. 401/403 throw
// AuthError at once; other statuses are returned to the caller. Exhausted
// retries throw RateLimited (last status 429) or NetworkError.
HttpResponse send_with_retry(HttpTransport& transport, const HttpRequest& request, const RetryPolicy& policy,
                             const Sleeper& sleeper);

}  // namespace hallubench::net
