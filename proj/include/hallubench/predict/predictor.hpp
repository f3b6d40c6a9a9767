#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hallubench/data/dataset.hpp"
#include "hallubench/llm/gateway.hpp"
#include "hallubench/predict/decode.hpp"
#include "hallubench/predict/task.hpp"

namespace hallubench::predict {

struct PredictionRecord {
  std::string smiles;
  std::size_t row_index = 0;
  std::string dataset;
  std::string setting;
  double p_yes = 0.0;
  double p_no = 1.0;
  bool predicted_yes = false;
  int true_label = 0;
  bool degraded = false;  // decoded from text because logprobs were unavailable

  bool operator==(const PredictionRecord&) const = default;
};

Json to_json(const PredictionRecord& record);
PredictionRecord prediction_from_json(const Json& json);

struct PredictionInput {
  data::LabeledMolecule molecule;
  // nullopt: no description exists under this setting (molecule excluded).
  // Empty string: the SMILES-only setting.
  std::optional<std::string> description;
};

struct SkippedPrediction {
  std::size_t row_index = 0;
  std::string smiles;
  std::string reason;
};

struct PredictOptions {
  Task task = Task::HIV;
  std::string dataset;
  std::string setting;
  llm::GenerationParams params;
  int top_k = 20;
  bool logprob_fallback = true;
};

struct PredictionBatch {
  std::vector<PredictionRecord> records;  // ascending row_index
  std::vector<SkippedPrediction> skipped;
  std::size_t total = 0;
  std::size_t excluded = 0;  // no description under the setting
  std::size_t degraded = 0;

  // Share of molecules that had a description under the setting.
  double coverage() const noexcept;
};

// Queries the gateway for each input concurrently (bounded by the backend).
// A failure on one molecule records it as skipped. Auth, configuration and
// unsupported-logprob errors (without fallback) abort the whole batch.
PredictionBatch predict_batch(llm::Gateway& gateway, const std::vector<PredictionInput>& inputs,
                              const PredictOptions& options);

}  // namespace hallubench::predict
