#include "hallubench/predict/predictor.hpp"

#include <algorithm>
#include <atomic>

#include <spdlog/spdlog.h>

#include "hallubench/util/concurrency.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::predict {

Json to_json(const PredictionRecord& r) {
  return Json{{"smiles", r.smiles},   {"row_index", r.row_index},       {"dataset", r.dataset},
              {"setting", r.setting}, {"p_yes", r.p_yes},               {"p_no", r.p_no},
              {"predicted", r.predicted_yes ? "Yes" : "No"},              {"true_label", r.true_label},
              {"degraded", r.degraded}};
}

PredictionRecord prediction_from_json(const Json& j) {
  try {
    PredictionRecord r;
    r.smiles = j.at("smiles").get<std::string>();
    r.row_index = j.at("row_index").get<std::size_t>();
    r.dataset = j.at("dataset").get<std::string>();
    r.setting = j.at("setting").get<std::string>();
    r.p_yes = j.at("p_yes").get<double>();
    r.p_no = j.at("p_no").get<double>();
    r.predicted_yes = j.at("predicted").get<std::string>() == "Yes";
    r.true_label = j.at("true_label").get<int>();
    r.degraded = j.value("degraded", false);
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MissingField, std::string("prediction record: ") + e.what());
  }
}

double PredictionBatch::coverage() const noexcept {
  return total == 0 ? 0.0 : static_cast<double>(total - excluded) / static_cast<double>(total);
}

PredictionBatch predict_batch(llm::Gateway& gateway, const std::vector<PredictionInput>& inputs,
                              const PredictOptions& options) {
  PredictionBatch batch;
  batch.total = inputs.size();
  std::vector<std::optional<PredictionRecord>> results(inputs.size());
  std::vector<std::string> errors(inputs.size());
  std::atomic<bool> logprobs_unsupported{false};

  auto decide = [&](const llm::ChatPrompt& prompt) -> std::pair<YesNo, bool> {
    if (!logprobs_unsupported.load()) {
      try {
        return {decode_yes_no(gateway.first_token_logprobs(prompt, options.params, options.top_k)), false};
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LogprobsUnsupported || !options.logprob_fallback) throw;
        if (!logprobs_unsupported.exchange(true)) {
          spdlog::warn("{}: logprobs unavailable, falling back to text answers", options.params.model);
        }
      }
    }
    auto short_params = options.params;
    short_params.max_tokens = 4;
    return {decode_text_answer(gateway.chat_complete(prompt, short_params)), true};
  };

  parallel_for_index(inputs.size(), static_cast<std::size_t>(gateway.backend().max_concurrency()),
                     [&](std::size_t i) {
                       const auto& input = inputs[i];
                       if (!input.description) return;
                       try {
                         const auto prompt =
                             build_task_prompt(input.molecule.smiles, *input.description, options.task);
                         const auto [answer, degraded] = decide(prompt);
                         results[i] = PredictionRecord{input.molecule.smiles, input.molecule.row_index,
                                                       options.dataset,        options.setting,
                                                       answer.p_yes,           1.0 - answer.p_yes,
                                                       answer.yes,             input.molecule.label,
                                                       degraded};
                       } catch (const Error& e) {
                         if (e.code() == ErrorCode::AuthError || e.code() == ErrorCode::LogprobsUnsupported ||
                             category(e.code()) == ErrorCategory::Config) {
                           throw;
                         }
                         errors[i] = e.what();
                       }
                     });

  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!inputs[i].description) {
      ++batch.excluded;
    } else if (results[i]) {
      batch.degraded += results[i]->degraded ? 1 : 0;
      batch.records.push_back(std::move(*results[i]));
    } else {
      batch.skipped.push_back({inputs[i].molecule.row_index, inputs[i].molecule.smiles, errors[i]});
    }
  }
  std::stable_sort(batch.records.begin(), batch.records.end(),
                   [](const auto& a, const auto& b) { return a.row_index < b.row_index; });
  if (!batch.skipped.empty()) {
    spdlog::warn("{}/{}: {} molecules skipped after errors", options.dataset, options.setting, batch.skipped.size());
  }
  return batch;
}

}  // namespace hallubench::predict
