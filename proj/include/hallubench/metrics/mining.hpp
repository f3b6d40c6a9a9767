#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hallubench/metrics/tables.hpp"
#include "hallubench/predict/predictor.hpp"
#include "hallubench/util/io.hpp"

namespace hallubench::metrics {

struct BeneficialCase {
  std::string smiles;
  std::size_t row_index = 0;
  std::string dataset;
  std::string hallucination_source;  // setting that produced the description
  double p_true_hallu = 0.0;
  double max_p_true_baseline = 0.0;

  bool operator==(const BeneficialCase&) const = default;
};

Json to_json(const BeneficialCase& c);
BeneficialCase beneficial_from_json(const Json& json);

// Probability the prediction assigned to the true label.
double p_true(const predict::PredictionRecord& record) noexcept;

struct CellCount {
  std::size_t evaluated = 0;
  std::size_t beneficial = 0;

  double percent() const noexcept;
};

struct MiningResult {
  std::vector<BeneficialCase> cases;  // sorted by dataset, source, row
  std::map<std::pair<std::string, std::string>, CellCount> cells;  // (source, dataset)
  std::size_t groups = 0;
  std::size_t incomplete_groups = 0;  // skipped: a required baseline was absent
};

struct MiningOptions {
  BaselineNames baselines;
  // The PubChem baseline joins the max only where it covers the molecule.
  bool require_pubchem = false;
};

// Groups predictions by (dataset, smiles). A hallucinated prediction is
// beneficial when it is correct and its p(true label) strictly exceeds every
// baseline present in the group. Throws MissingBaseline when there are no
// hallucinated predictions or no group carries the required baselines.
MiningResult mine_beneficial(const std::vector<predict::PredictionRecord>& records, const MiningOptions& options = {});

// Sources as rows, datasets as columns, percent with one decimal and a row Avg.
std::string render_proportions_markdown(const MiningResult& result);
std::string render_proportions_csv(const MiningResult& result);

}  // namespace hallubench::metrics
