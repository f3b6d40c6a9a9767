#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "hallubench/net/http.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::net {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::ConfigError, "URL without scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse send(const HttpRequest& request) override {
    const auto [origin, path] = split_url(request.url);
    httplib::Client client(origin);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
    client.set_connection_timeout(std::chrono::seconds(std::min<long long>(seconds.count(), 30)));
    client.set_read_timeout(seconds);
    client.set_write_timeout(seconds);
    client.set_follow_location(true);
    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : request.headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        headers.emplace(k, v);
      }
    }
    httplib::Result result = request.method == "POST"
                                 ? client.Post(path, headers, request.body, content_type)
                                 : client.Get(path, headers);
    HttpResponse response;
    if (!result) {
      response.error = httplib::to_string(result.error());
      return response;
    }
    response.status = result->status;
    response.body = result->body;
    for (const auto& [k, v] : result->headers) response.headers[to_lower(k)] = v;
    return response;
  }
};

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport() { return std::make_shared<HttplibTransport>(); }

}  // namespace hallubench::net
