#include "hallubench/data/dataset.hpp"

#include <charconv>
#include <optional>

#include <spdlog/spdlog.h>

#include "hallubench/chem/smiles.hpp"
#include "hallubench/util/error.hpp"
#include "hallubench/util/io.hpp"

namespace hallubench::data {
namespace {

std::optional<double> as_number(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

bool is_missing(std::string_view cell) {
  const auto lower = to_lower(cell);
  return lower.empty() || lower == "nan" || lower == "na";
}

std::size_t require_column(const CsvTable& table, std::string_view name) {
  if (auto idx = table.column(name)) return *idx;
  throw Error(ErrorCode::MissingColumn, "column '" + std::string(name) + "' not found");
}

}  // namespace

std::string_view to_string(SplitKind kind) noexcept { return kind == SplitKind::Scaffold ? "scaffold" : "random"; }

SplitKind parse_split_kind(std::string_view text) {
  const auto lower = to_lower(text);
  if (lower == "scaffold") return SplitKind::Scaffold;
  if (lower == "random") return SplitKind::Random;
  throw Error(ErrorCode::ConfigError, "unknown split kind '" + std::string(text) + "'");
}

bool has_preset(std::string_view name) noexcept {
  const auto lower = to_lower(name);
  return lower == "hiv" || lower == "bbbp" || lower == "clintox" || lower == "sider" || lower == "tox21";
}

DatasetSpec preset_spec(std::string_view name) {
  const auto lower = to_lower(name);
  if (lower == "hiv") return {"HIV", "smiles", "HIV_active", "1", SplitKind::Scaffold};
  if (lower == "bbbp") return {"BBBP", "smiles", "p_np", "1", SplitKind::Scaffold};
  if (lower == "clintox") return {"Clintox", "smiles", "CT_TOX", "1", SplitKind::Random};
  if (lower == "sider") {
    return {"SIDER", "smiles", "Reproductive system and breast disorders", "1", SplitKind::Random};
  }
  if (lower == "tox21") return {"Tox21", "smiles", "SR-MMP", "1", SplitKind::Random};
  throw Error(ErrorCode::ConfigError, "no built-in dataset named '" + std::string(name) + "'");
}

DatasetSpec select_label(const CsvTable& table, DatasetSpec spec, std::string_view label) {
  if (!label.empty()) spec.label_column = std::string(label);
  require_column(table, spec.label_column);
  return spec;
}

LoadedDataset load_dataset(const CsvTable& table, const DatasetSpec& spec) {
  const auto smiles_col = require_column(table, spec.smiles_column);
  const auto label_col = require_column(table, spec.label_column);
  const auto positive = trim(spec.positive_value);
  const auto positive_number = as_number(positive);

  LoadedDataset out;
  out.total_rows = table.rows.size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto cell = trim(row[label_col]);
    if (is_missing(cell)) {
      ++out.skipped_missing_label;
      continue;
    }
    auto smiles = trim(row[smiles_col]);
    try {
      chem::parse_smiles(smiles);
    } catch (const Error& e) {
      spdlog::debug("{} row {}: skipping SMILES '{}': {}", spec.name, r, smiles, e.detail());
      ++out.skipped_unparseable;
      continue;
    }
    bool is_positive = cell == positive;
    if (!is_positive && positive_number) {
      const auto value = as_number(cell);
      is_positive = value && *value == *positive_number;
    }
    out.records.push_back({std::move(smiles), is_positive ? 1 : 0, r});
  }
  if (out.skipped() > 0) {
    spdlog::info("{}: kept {} of {} rows ({} unparseable SMILES, {} missing labels)", spec.name,
                 out.records.size(), out.total_rows, out.skipped_unparseable, out.skipped_missing_label);
  }
  if (out.records.empty()) throw Error(ErrorCode::EmptyDataset, spec.name + ": no usable rows");
  return out;
}

LoadedDataset load_dataset(const std::filesystem::path& path, const DatasetSpec& spec) {
  return load_dataset(read_csv(path), spec);
}

}  // namespace hallubench::data
