#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hallubench/data/csv.hpp"

namespace hallubench::data {

enum class SplitKind { Scaffold, Random };

std::string_view to_string(SplitKind kind) noexcept;
SplitKind parse_split_kind(std::string_view text);

struct DatasetSpec {
  std::string name;
  std::string smiles_column = "smiles";
  std::string label_column;
  std::string positive_value = "1";
  SplitKind split_kind = SplitKind::Random;
};

// Built-in bindings for HIV, BBBP, Clintox, SIDER and Tox21 (case-insensitive).
// Throws ConfigError for other names.
DatasetSpec preset_spec(std::string_view name);
bool has_preset(std::string_view name) noexcept;

struct LabeledMolecule {
  std::string smiles;
  int label = 0;
  std::size_t row_index = 0;  // 0-based data row, header excluded
};

struct LoadedDataset {
  std::vector<LabeledMolecule> records;
  std::size_t total_rows = 0;
  std::size_t skipped_unparseable = 0;
  std::size_t skipped_missing_label = 0;

  std::size_t skipped() const noexcept { return skipped_unparseable + skipped_missing_label; }
};

// Binds the label column for a multi-label table. An empty `label` keeps the
// column already named by `spec`. Throws MissingColumn when absent.
DatasetSpec select_label(const CsvTable& table, DatasetSpec spec, std::string_view label = {});

// Empty, "nan" and "na" label cells drop the row. Other cells map to 1 when
// they equal the positive value (textually or numerically), else 0.
LoadedDataset load_dataset(const CsvTable& table, const DatasetSpec& spec);
LoadedDataset load_dataset(const std::filesystem::path& path, const DatasetSpec& spec);

}  // namespace hallubench::data
