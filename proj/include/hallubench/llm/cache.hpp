#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "hallubench/util/io.hpp"

namespace hallubench::llm {

// Append-only JSON-lines store of {key, request, response, timestamp}. The
// whole file is indexed on open; later lines win. An empty path keeps the
// cache in memory only.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path path = {}, Clock clock = default_clock());

  std::optional<Json> lookup(const std::string& key) const;
  void store(const std::string& key, const Json& request, const Json& response);

  std::size_t size() const;
  std::size_t corrupt_lines() const noexcept { return corrupt_lines_; }

 private:
  std::filesystem::path path_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, Json> entries_;
  std::size_t corrupt_lines_ = 0;
};

}  // namespace hallubench::llm
