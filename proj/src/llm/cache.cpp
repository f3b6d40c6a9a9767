#include "hallubench/llm/cache.hpp"

#include <spdlog/spdlog.h>

namespace hallubench::llm {

ResponseCache::ResponseCache(std::filesystem::path path, Clock clock)
    : path_(std::move(path)), clock_(std::move(clock)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  auto loaded = read_jsonl(path_);
  corrupt_lines_ = loaded.corrupt_lines;
  for (auto& row : loaded.rows) {
    if (!row.is_object() || !row.contains("key") || !row["key"].is_string() || !row.contains("response")) {
      ++corrupt_lines_;
      continue;
    }
    entries_[row["key"].get<std::string>()] = std::move(row["response"]);
  }
  if (corrupt_lines_ > 0) spdlog::warn("cache {}: skipped {} unreadable lines", path_.string(), corrupt_lines_);
}

std::optional<Json> ResponseCache::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  return std::nullopt;
}

void ResponseCache::store(const std::string& key, const Json& request, const Json& response) {
  std::lock_guard lock(mutex_);
  entries_[key] = response;
  if (!path_.empty()) {
    append_jsonl(path_, Json{{"key", key}, {"request", request}, {"response", response}, {"timestamp", clock_()}});
  }
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace hallubench::llm
