#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hallubench::data {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

// RFC 4180: quoted fields may contain commas, doubled quotes and newlines.
// A UTF-8 byte-order mark and CRLF line endings are accepted. Short rows are
// padded with empty cells.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

std::string csv_escape(std::string_view field);

}  // namespace hallubench::data
