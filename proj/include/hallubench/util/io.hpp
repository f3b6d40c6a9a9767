#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hallubench {

using Json = nlohmann::json;

// Produces ISO-8601 UTC timestamps for record provenance. Injected so that
// reruns can be made byte-identical.
using Clock = std::function<std::string()>;

std::string format_utc(std::chrono::system_clock::time_point tp);

// Wall clock, or the fixed instant from SOURCE_DATE_EPOCH when that variable
// is set.
Clock default_clock();
Clock fixed_clock(std::string timestamp);

using Sleeper = std::function<void(std::chrono::milliseconds)>;
Sleeper real_sleeper();

std::string read_file(const std::filesystem::path& path);

// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct JsonlReadResult {
  std::vector<Json> rows;
  std::size_t corrupt_lines = 0;
};

// Reads a JSON-lines file; blank lines are ignored and lines that fail to
// parse are counted and skipped.
JsonlReadResult read_jsonl(const std::filesystem::path& path);

std::string to_jsonl(const std::vector<Json>& rows);

// Appends one compact JSON line and flushes.
void append_jsonl(const std::filesystem::path& path, const Json& row);

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);
std::vector<std::string> split(std::string_view text, char delim);

// Deterministic fixed-point rendering ("%.{digits}f").
std::string format_fixed(double value, int digits);

}  // namespace hallubench
