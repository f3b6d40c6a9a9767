#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "hallubench/net/http.hpp"
#include "hallubench/util/error.hpp"
#include "hallubench/util/hashing.hpp"

namespace hallubench::net {

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int attempt, std::uint64_t salt) {
  const double jitter = 1.0 + 0.5 * unit_interval(splitmix64(salt ^ static_cast<std::uint64_t>(attempt)));
  const double base = static_cast<double>(policy.backoff_base.count()) * std::ldexp(1.0, std::min(attempt, 30));
  const auto ms = static_cast<long long>(std::min(base * jitter, static_cast<double>(policy.backoff_cap.count())));
  return std::chrono::milliseconds(ms);
}

HttpResponse send_with_retry(HttpTransport& transport, const HttpRequest& request, const RetryPolicy& policy,
                             const Sleeper& sleeper) {
  const std::uint64_t salt = fnv1a64(request.url + '\n' + request.body);
  HttpResponse response;
  for (int attempt = 0;; ++attempt) {
    response = transport.send(request);
    const int status = response.status;
    if (status == 401 || status == 403) {
      throw Error(ErrorCode::AuthError, "HTTP " + std::to_string(status) + " from " + request.url);
    }
    const bool retryable = status == 0 || status == 429 || status >= 500;
    if (!retryable) return response;
    if (attempt >= policy.retry_limit) break;
    auto delay = backoff_delay(policy, attempt, salt);
    if (auto it = response.headers.find("retry-after"); status == 429 && it != response.headers.end()) {
      try {
        delay = std::max(delay, std::chrono::milliseconds(std::stoll(it->second) * 1000));
      } catch (const std::exception&) {
      }
    }
    spdlog::warn("{} {} -> {}; retry {}/{} in {} ms", request.method, request.url,
                 status == 0 ? response.error : std::to_string(status), attempt + 1, policy.retry_limit,
                 delay.count());
    sleeper(delay);
  }
  if (response.status == 429) {
    throw Error(ErrorCode::RateLimited, "rate limited by " + request.url + " after retries");
  }
  throw Error(ErrorCode::NetworkError,
              request.url + ": " + (response.status == 0 ? response.error : "HTTP " + std::to_string(response.status)));
}

}  // namespace hallubench::net
