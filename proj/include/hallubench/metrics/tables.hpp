#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hallubench::metrics {

// Per-dataset ROC-AUC in percent for one (predictor, setting) run.
struct RunResult {
  std::string model;
  std::string setting;
  std::map<std::string, double> per_dataset_auc;
  double avg = 0.0;

  bool operator==(const RunResult&) const = default;
};

// Builds a result whose avg is the mean of the given per-dataset values.
RunResult make_run_result(std::string model, std::string setting, std::map<std::string, double> per_dataset_auc);

struct DeltaRow {
  std::string model;
  std::string setting;
  std::map<std::string, double> per_dataset_auc;
  double avg = 0.0;
  std::optional<double> delta_smiles;  // empty on the baseline's own row
  std::optional<double> delta_molt5;
  std::optional<double> delta_pubchem;
};

// Setting names that identify the three baselines, compared case-insensitively.
struct BaselineNames {
  std::string smiles = "smiles";
  std::string molt5 = "molt5";
  std::string pubchem = "pubchem";
};

// One row per result, grouped by model in first-appearance order, with each
// row's avg compared against the same model's baseline rows. Throws
// MissingBaseline when a model lacks any of the three baselines.
std::vector<DeltaRow> delta_table(const std::vector<RunResult>& results, const BaselineNames& baselines = {});

// Benchmark datasets first in their usual order, then any others by name.
std::vector<std::string> order_datasets(std::vector<std::string> names);
std::vector<std::string> dataset_columns(const std::vector<DeltaRow>& rows);

// "+8.22" / "-6.53" / "-" for an empty delta.
std::string format_delta(const std::optional<double>& delta);

// One block per model: setting, datasets, Avg and the three deltas, two decimals.
std::string render_markdown(const std::vector<DeltaRow>& rows);
std::string render_csv(const std::vector<DeltaRow>& rows);

}  // namespace hallubench::metrics
