#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hallubench/data/dataset.hpp"
#include "hallubench/data/split.hpp"
#include "hallubench/llm/types.hpp"
#include "hallubench/predict/task.hpp"
#include "hallubench/util/io.hpp"

namespace hallubench::pipeline {

struct DatasetEntry {
  data::DatasetSpec spec;
  std::filesystem::path path;
  predict::Task task = predict::Task::HIV;
  std::optional<std::filesystem::path> molt5_path;  // reference descriptions
};

// A named (backend, generation parameters) pair used as generator,
// predictor or annotator.
struct ModelEntry {
  std::string name;
  std::string backend;
  llm::GenerationParams params;
  int top_k = 20;
};

// What precedes the task instruction in a prediction prompt.
struct Setting {
  enum class Kind { Smiles, MolT5, PubChem, Generated };
  Kind kind = Kind::Smiles;
  std::string generator;  // Generated only

  // File-name form: "smiles", "molt5", "pubchem", "llm_<generator>".
  std::string slug() const;
  bool operator==(const Setting&) const = default;
};

// Accepts "smiles", "molt5", "pubchem", "llm:<name>" and "llm_<name>".
// Throws ConfigError.
Setting parse_setting(std::string_view text);

struct ScorerEntry {
  std::string kind = "lexical";  // "lexical" or "http"
  std::string endpoint;
  int max_concurrency = 4;
};

struct RunConfig {
  std::vector<DatasetEntry> datasets;
  std::map<std::string, llm::BackendConfig> backends;
  std::vector<ModelEntry> generators;
  std::vector<ModelEntry> predictors;
  std::optional<ModelEntry> annotator;
  std::vector<Setting> settings;
  std::uint64_t seed = 42;
  std::string evaluate_split = "test";  // "test" or "all"
  data::SplitFractions fractions;
  std::filesystem::path output_dir = "out";
  std::string pubchem_base_url = "https://pubchem.ncbi.nlm.nih.gov/rest/pug";
  ScorerEntry scorer;
  bool logprob_fallback = true;

  // Referenced backends and generators must exist and names must be unique.
  // Throws ConfigError.
  void validate() const;

  const DatasetEntry& dataset(std::string_view name) const;
  const ModelEntry& generator(std::string_view name) const;
  const ModelEntry& predictor(std::string_view name) const;
};

// Relative paths in the document resolve against `base_dir`.
RunConfig config_from_json(const Json& document, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace hallubench::pipeline
