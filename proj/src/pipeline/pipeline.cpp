#include "hallubench/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <spdlog/spdlog.h>

#include "hallubench/chem/smiles.hpp"
#include "hallubench/data/split.hpp"
#include "hallubench/describe/pubchem.hpp"
#include "hallubench/metrics/auc.hpp"
#include "hallubench/metrics/consistency.hpp"
#include "hallubench/pipeline/charts.hpp"
#include "hallubench/predict/predictor.hpp"
#include "hallubench/util/concurrency.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::pipeline {

namespace {

std::optional<std::string> canonical_or_none(const std::string& smiles) {
  try {
    return chem::canonical_smiles(chem::parse_smiles(smiles));
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool aborts_batch(const Error& e) {
  return e.code() == ErrorCode::AuthError || category(e.code()) == ErrorCategory::Config;
}

std::string opt_number(const std::optional<double>& v, int digits) {
  return v ? format_fixed(*v, digits) : std::string();
}

}  // namespace

Environment default_environment() { return {net::make_http_transport(), default_clock(), real_sleeper()}; }

Pipeline::Pipeline(RunConfig config, Environment env)
    : config_(std::move(config)), env_(std::move(env)), layout_(config_.output_dir) {
  config_.validate();
  if (!env_.clock) env_.clock = default_clock();
  if (!env_.sleeper) env_.sleeper = real_sleeper();
}

const Pipeline::EvaluationSet& Pipeline::evaluation_set(const std::string& dataset) {
  const auto& entry = config_.dataset(dataset);
  std::lock_guard lock(mutex_);
  if (auto it = evaluation_sets_.find(entry.spec.name); it != evaluation_sets_.end()) return it->second;

  const auto loaded = data::load_dataset(entry.path, entry.spec);
  EvaluationSet set{entry.spec.name, {}, loaded.total_rows, loaded.skipped()};
  if (config_.evaluate_split == "all") {
    set.molecules = loaded.records;
  } else {
    const auto split = data::make_split(loaded.records, entry.spec.split_kind, config_.fractions, config_.seed);
    const std::set<std::size_t> test(split.test.begin(), split.test.end());
    for (const auto& r : loaded.records) {
      if (test.contains(r.row_index)) set.molecules.push_back(r);
    }
  }
  spdlog::info("{}: {} rows, {} skipped, {} evaluated ({} split)", entry.spec.name, loaded.total_rows,
               loaded.skipped(), set.molecules.size(), config_.evaluate_split);
  return evaluation_sets_.emplace(entry.spec.name, std::move(set)).first->second;
}

std::shared_ptr<llm::ResponseCache> Pipeline::cache(const std::string& name) {
  std::lock_guard lock(mutex_);
  auto& slot = caches_[name];
  if (!slot) slot = std::make_shared<llm::ResponseCache>(layout_.cache(name), env_.clock);
  return slot;
}

llm::Gateway& Pipeline::gateway(const std::string& backend) {
  const auto it = config_.backends.find(backend);
  if (it == config_.backends.end()) throw Error(ErrorCode::ConfigError, "backend '" + backend + "' is not defined");
  auto shared_cache = cache("llm");
  std::lock_guard lock(mutex_);
  auto& slot = gateways_[backend];
  if (!slot) {
    slot = std::make_shared<llm::Gateway>(llm::make_backend(it->second, env_.transport, env_.sleeper), shared_cache);
  }
  return *slot;
}

std::map<std::string, describe::DescriptionRecord> Pipeline::read_descriptions(
    const std::filesystem::path& path) const {
  std::map<std::string, describe::DescriptionRecord> out;
  if (!std::filesystem::exists(path)) return out;
  for (const auto& row : read_jsonl(path).rows) {
    auto record = describe::description_from_json(row);
    out.insert_or_assign(record.smiles, std::move(record));
  }
  return out;
}

void Pipeline::write_manifest(const std::filesystem::path& data_file, Json body) const {
  body["created_at"] = env_.clock();
  body["seed"] = config_.seed;
  body["evaluate_split"] = config_.evaluate_split;
  write_file_atomic(manifest_path(data_file), body.dump(2) + "\n");
}

DescribeSummary Pipeline::describe(const std::string& dataset, const Setting& source) {
  if (source.kind == Setting::Kind::Smiles) {
    throw Error(ErrorCode::ConfigError, "the smiles setting uses no descriptions");
  }
  const auto& set = evaluation_set(dataset);
  DescribeSummary summary;
  summary.path = layout_.descriptions(set.name, source.slug());

  std::vector<std::string> smiles;
  {
    std::set<std::string> seen;
    for (const auto& m : set.molecules) {
      if (seen.insert(m.smiles).second) smiles.push_back(m.smiles);
    }
  }
  summary.molecules = smiles.size();
  std::vector<std::optional<describe::DescriptionRecord>> records(smiles.size());
  Json manifest{{"command", "describe"}, {"dataset", set.name}, {"source", source.slug()}};

  if (source.kind == Setting::Kind::MolT5) {
    const auto& entry = config_.dataset(dataset);
    if (!entry.molt5_path) {
      throw Error(ErrorCode::ConfigError, "dataset " + set.name + " has no \"molt5\" description file configured");
    }
    const auto external = describe::load_external_descriptions(*entry.molt5_path, describe::DescriptionSource::MolT5,
                                                               env_.clock);
    std::map<std::string, const describe::DescriptionRecord*> by_smiles, by_canonical;
    for (const auto& r : external.records) {
      by_smiles.emplace(r.smiles, &r);
      if (auto c = canonical_or_none(r.smiles)) by_canonical.emplace(*c, &r);
    }
    for (std::size_t i = 0; i < smiles.size(); ++i) {
      const describe::DescriptionRecord* hit = nullptr;
      if (auto it = by_smiles.find(smiles[i]); it != by_smiles.end()) {
        hit = it->second;
      } else if (auto c = canonical_or_none(smiles[i])) {
        if (auto jt = by_canonical.find(*c); jt != by_canonical.end()) hit = jt->second;
      }
      if (hit == nullptr) continue;
      records[i] = *hit;
      records[i]->smiles = smiles[i];
    }
    manifest["reference_file"] = entry.molt5_path->string();
  } else if (source.kind == Setting::Kind::PubChem) {
    describe::PubChemClient client(env_.transport, config_.pubchem_base_url, cache("pubchem"), {}, env_.sleeper);
    for (std::size_t i = 0; i < smiles.size(); ++i) {
      try {
        const auto meta = client.fetch(smiles[i]);
        if (!meta) continue;
        describe::formula_matches(smiles[i], *meta);
        records[i] = describe::DescriptionRecord{smiles[i], describe::DescriptionSource::PubChem, std::nullopt,
                                                 std::nullopt, describe::pubchem_description(*meta), env_.clock()};
      } catch (const Error& e) {
        if (aborts_batch(e)) throw;
        spdlog::warn("PubChem lookup failed for {}: {}", smiles[i], e.what());
        ++summary.failed;
      }
    }
    manifest["pubchem_base_url"] = config_.pubchem_base_url;
  } else {
    const auto& generator = config_.generator(source.generator);
    auto& gw = gateway(generator.backend);
    const auto existing = read_descriptions(summary.path);
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < smiles.size(); ++i) {
      const auto it = existing.find(smiles[i]);
      if (it != existing.end() && it->second.model == generator.params.model && it->second.temperature &&
          std::abs(*it->second.temperature - generator.params.temperature) < 1e-12) {
        records[i] = it->second;
        ++summary.reused;
      } else {
        missing.push_back(i);
      }
    }
    std::vector<std::string> errors(smiles.size());
    parallel_for_index(missing.size(), static_cast<std::size_t>(gw.backend().max_concurrency()), [&](std::size_t k) {
      const auto i = missing[k];
      try {
        records[i] = describe::generate_description(gw, smiles[i], generator.params, env_.clock);
      } catch (const Error& e) {
        if (aborts_batch(e)) throw;
        errors[i] = e.what();
      }
    });
    for (auto i : missing) {
      if (!errors[i].empty()) {
        spdlog::warn("description failed for {}: {}", smiles[i], errors[i]);
        ++summary.failed;
      }
    }
    manifest["generator"] = generator.name;
    manifest["model"] = generator.params.model;
    manifest["temperature"] = generator.params.temperature;
    manifest["max_tokens"] = generator.params.max_tokens;
    manifest["backend"] = gw.backend().identity();
  }

  std::vector<Json> rows;
  for (const auto& r : records) {
    if (r) rows.push_back(describe::to_json(*r));
  }
  summary.written = rows.size();
  summary.uncovered = summary.molecules - summary.written - summary.failed;
  write_file_atomic(summary.path, to_jsonl(rows));
  manifest["molecules"] = summary.molecules;
  manifest["written"] = summary.written;
  manifest["reused"] = summary.reused;
  manifest["uncovered"] = summary.uncovered;
  manifest["failed"] = summary.failed;
  write_manifest(summary.path, std::move(manifest));
  spdlog::info("describe {}/{}: {} of {} molecules described ({} uncovered, {} failed)", set.name, source.slug(),
               summary.written, summary.molecules, summary.uncovered, summary.failed);
  return summary;
}

PredictSummary Pipeline::predict(const std::string& dataset, const std::string& predictor_name,
                                 const Setting& setting) {
  const auto& predictor = config_.predictor(predictor_name);
  if (setting.kind == Setting::Kind::Generated) config_.generator(setting.generator);
  const auto& entry = config_.dataset(dataset);
  const auto& set = evaluation_set(dataset);

  std::map<std::string, describe::DescriptionRecord> descriptions;
  if (setting.kind != Setting::Kind::Smiles) {
    const auto path = layout_.descriptions(set.name, setting.slug());
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorCode::MissingDescriptions, "no " + setting.slug() + " descriptions for " + set.name +
                                                      "; run `describe` for that source first");
    }
    descriptions = read_descriptions(path);
  }

  std::vector<predict::PredictionInput> inputs;
  for (const auto& m : set.molecules) {
    predict::PredictionInput in{m, std::nullopt};
    if (setting.kind == Setting::Kind::Smiles) {
      in.description = "";
    } else if (auto it = descriptions.find(m.smiles); it != descriptions.end()) {
      in.description = it->second.text;
    }
    inputs.push_back(std::move(in));
  }

  predict::PredictOptions options;
  options.task = entry.task;
  options.dataset = set.name;
  options.setting = setting.slug();
  options.params = predictor.params;
  options.top_k = predictor.top_k;
  options.logprob_fallback = config_.logprob_fallback;
  auto& gw = gateway(predictor.backend);
  const auto batch = predict::predict_batch(gw, inputs, options);

  PredictSummary summary;
  summary.path = layout_.predictions(predictor.name, set.name, setting.slug());
  summary.total = batch.total;
  summary.predicted = batch.records.size();
  summary.excluded = batch.excluded;
  summary.skipped = batch.skipped.size();
  summary.degraded = batch.degraded;
  summary.coverage = batch.coverage();

  std::vector<Json> rows;
  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& r : batch.records) {
    rows.push_back(predict::to_json(r));
    scores.push_back(r.p_yes);
    labels.push_back(r.true_label);
  }
  write_file_atomic(summary.path, to_jsonl(rows));
  try {
    summary.auc_percent = 100.0 * metrics::roc_auc(scores, labels);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UndefinedAUC) throw;
    spdlog::warn("{}/{}/{}: ROC-AUC undefined ({})", predictor.name, set.name, setting.slug(), e.detail());
  }

  Json ledger_row{{"predictor", predictor.name},
                  {"model", predictor.params.model},
                  {"dataset", set.name},
                  {"setting", setting.slug()},
                  {"auc", summary.auc_percent ? Json(*summary.auc_percent) : Json(nullptr)},
                  {"n", summary.predicted},
                  {"total", summary.total},
                  {"excluded", summary.excluded},
                  {"skipped", summary.skipped},
                  {"degraded", summary.degraded},
                  {"coverage", summary.coverage},
                  {"backend", gw.backend().identity()},
                  {"created_at", env_.clock()}};
  append_jsonl(layout_.results(), ledger_row);

  Json skipped = Json::array();
  for (const auto& s : batch.skipped) skipped.push_back({{"row_index", s.row_index}, {"smiles", s.smiles}, {"reason", s.reason}});
  ledger_row.erase("created_at");
  ledger_row["command"] = "predict";
  ledger_row["task"] = predict::to_string(entry.task);
  ledger_row["temperature"] = predictor.params.temperature;
  ledger_row["top_k"] = predictor.top_k;
  ledger_row["skipped_rows"] = skipped;
  write_manifest(summary.path, std::move(ledger_row));

  spdlog::info("predict {}/{}/{}: {} predicted, coverage {}%, ROC-AUC {}", predictor.name, set.name, setting.slug(),
               summary.predicted, format_fixed(100.0 * summary.coverage, 1),
               summary.auc_percent ? format_fixed(*summary.auc_percent, 2) : "undefined");
  return summary;
}

ConsistencySummary Pipeline::score_consistency(const std::string& dataset, const std::string& generator) {
  const auto& set_name = config_.dataset(dataset).spec.name;
  const auto reference_path = layout_.descriptions(set_name, "molt5");
  const auto candidate_path = layout_.descriptions(set_name, Setting{Setting::Kind::Generated, generator}.slug());
  for (const auto& p : {reference_path, candidate_path}) {
    if (!std::filesystem::exists(p)) {
      throw Error(ErrorCode::MissingDescriptions, p.string() + " does not exist; run `describe` first");
    }
  }
  const auto references = read_descriptions(reference_path);
  std::vector<metrics::ConsistencyPair> pairs;
  for (const auto& row : read_jsonl(candidate_path).rows) {
    const auto candidate = describe::description_from_json(row);
    const auto it = references.find(candidate.smiles);
    if (it == references.end()) continue;
    pairs.push_back({candidate.smiles, candidate.model.value_or(generator), it->second.text, candidate.text});
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::MissingDescriptions, "no molecule in " + set_name + " has both a MolT5 reference and a " +
                                                    generator + " description");
  }

  std::unique_ptr<metrics::ConsistencyScorer> scorer;
  if (config_.scorer.kind == "http") {
    scorer = std::make_unique<metrics::HttpConsistencyScorer>(config_.scorer.endpoint, env_.transport,
                                                              net::RetryPolicy{}, env_.sleeper,
                                                              config_.scorer.max_concurrency);
  } else {
    scorer = std::make_unique<metrics::LexicalOverlapScorer>();
  }
  const auto scores = metrics::consistency_scores(*scorer, pairs);

  ConsistencySummary summary;
  summary.path = layout_.consistency(generator, set_name);
  summary.pairs = scores.size();
  std::vector<Json> rows;
  for (const auto& s : scores) {
    rows.push_back(metrics::to_json(s));
    summary.mean_consistency += s.consistency;
    summary.mean_hallucination += s.hallucination_score;
  }
  summary.mean_consistency /= static_cast<double>(scores.size());
  summary.mean_hallucination /= static_cast<double>(scores.size());
  write_file_atomic(summary.path, to_jsonl(rows));
  write_manifest(summary.path, Json{{"command", "score-consistency"},
                                    {"dataset", set_name},
                                    {"generator", generator},
                                    {"scorer", config_.scorer.kind},
                                    {"pairs", summary.pairs},
                                    {"mean_consistency", summary.mean_consistency},
                                    {"mean_hallucination_score", summary.mean_hallucination}});
  spdlog::info("consistency {}/{}: {} pairs, mean consistency {}", generator, set_name, summary.pairs,
               format_fixed(summary.mean_consistency, 4));
  return summary;
}

std::vector<TemperatureRow> Pipeline::ablate_temperature(const std::vector<std::string>& datasets_in,
                                                         const std::string& generator, const std::string& predictor,
                                                         const std::vector<double>& temperatures) {
  if (temperatures.empty()) throw Error(ErrorCode::ConfigError, "ablate-temperature needs at least one temperature");
  for (double t : temperatures) {
    if (!(t >= 0.0 && t <= 2.0)) {
      throw Error(ErrorCode::ConfigError, "temperature " + std::to_string(t) + " is outside [0, 2]");
    }
  }
  config_.predictor(predictor);
  const auto base = config_.generator(generator);
  std::vector<std::string> datasets = datasets_in;
  if (datasets.empty()) {
    for (const auto& d : config_.datasets) datasets.push_back(d.spec.name);
  }

  std::vector<TemperatureRow> rows;
  for (double t : temperatures) {
    auto variant = base;
    variant.name = base.name + "_t" + format_fixed(t, 2);
    variant.params.temperature = t;
    if (std::none_of(config_.generators.begin(), config_.generators.end(),
                     [&](const ModelEntry& g) { return g.name == variant.name; })) {
      config_.generators.push_back(variant);
    }
    const Setting setting{Setting::Kind::Generated, variant.name};
    std::vector<double> aucs, hallucination;
    for (const auto& d : datasets) {
      describe(d, setting);
      if (auto auc = predict(d, predictor, setting).auc_percent) aucs.push_back(*auc);
      if (config_.dataset(d).molt5_path) {
        if (!std::filesystem::exists(layout_.descriptions(config_.dataset(d).spec.name, "molt5"))) {
          describe(d, Setting{Setting::Kind::MolT5, {}});
        }
        hallucination.push_back(score_consistency(d, variant.name).mean_hallucination);
      }
    }
    auto mean = [](const std::vector<double>& v) -> std::optional<double> {
      if (v.empty()) return std::nullopt;
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    rows.push_back({t, mean(aucs), mean(hallucination)});
  }

  const auto stem = layout_.ablations_dir() / ("temperature_" + safe_name(generator) + "_" + safe_name(predictor));
  std::string csv = "temperature,avg_auc,avg_hallucination_score\n";
  std::vector<std::string> labels;
  BarSeries auc_series{"Avg ROC-AUC (%)", {}}, hallu_series{"Hallucination score (%)", {}};
  for (const auto& r : rows) {
    csv += format_fixed(r.temperature, 2) + "," + opt_number(r.avg_auc, 4) + "," +
           opt_number(r.avg_hallucination_score, 4) + "\n";
    labels.push_back(format_fixed(r.temperature, 2));
    auc_series.values.push_back(r.avg_auc.value_or(0.0));
    hallu_series.values.push_back(100.0 * r.avg_hallucination_score.value_or(0.0));
  }
  write_file_atomic(stem.string() + ".csv", csv);
  write_file_atomic(stem.string() + ".svg",
                    bar_chart_svg("Temperature ablation: " + generator + " descriptions, " + predictor + " predictor",
                                  labels, {auc_series, hallu_series}, "percent"));
  return rows;
}

std::vector<SizeRow> Pipeline::ablate_size(const std::vector<std::string>& predictors_in,
                                           const std::vector<std::string>& datasets_in,
                                           const std::vector<Setting>& settings_in) {
  std::vector<std::string> predictors = predictors_in, datasets = datasets_in;
  if (predictors.empty()) {
    for (const auto& p : config_.predictors) predictors.push_back(p.name);
  }
  if (datasets.empty()) {
    for (const auto& d : config_.datasets) datasets.push_back(d.spec.name);
  }
  const auto settings = settings_in.empty() ? config_.settings : settings_in;
  if (predictors.empty() || datasets.empty() || settings.empty()) {
    throw Error(ErrorCode::ConfigError, "ablate-size needs predictors, datasets and settings");
  }

  std::vector<SizeRow> rows;
  std::vector<std::string> dataset_names;
  for (const auto& d : datasets) dataset_names.push_back(config_.dataset(d).spec.name);
  for (const auto& p : predictors) {
    for (const auto& s : settings) {
      SizeRow row{p, s.slug(), {}, std::nullopt};
      double sum = 0.0;
      for (const auto& d : datasets) {
        if (auto auc = predict(d, p, s).auc_percent) {
          row.per_dataset_auc[config_.dataset(d).spec.name] = *auc;
          sum += *auc;
        }
      }
      if (!row.per_dataset_auc.empty()) row.avg = sum / static_cast<double>(row.per_dataset_auc.size());
      rows.push_back(std::move(row));
    }
  }

  std::string csv = "predictor,setting";
  std::string md = "| Predictor | Setting |";
  for (const auto& d : dataset_names) {
    csv += "," + d;
    md += " " + d + " |";
  }
  csv += ",avg\n";
  md += " Avg |\n|---|---|";
  for (std::size_t i = 0; i <= dataset_names.size(); ++i) md += "---:|";
  md += "\n";
  for (const auto& r : rows) {
    csv += r.predictor + "," + r.setting;
    md += "| " + r.predictor + " | " + r.setting + " |";
    for (const auto& d : dataset_names) {
      const auto it = r.per_dataset_auc.find(d);
      const auto cell = it == r.per_dataset_auc.end() ? std::string() : format_fixed(it->second, 2);
      csv += "," + cell;
      md += " " + (cell.empty() ? std::string("n/a") : cell) + " |";
    }
    csv += "," + opt_number(r.avg, 2) + "\n";
    md += " " + (r.avg ? format_fixed(*r.avg, 2) : std::string("n/a")) + " |\n";
  }
  write_file_atomic(layout_.ablations_dir() / "size.csv", csv);
  write_file_atomic(layout_.ablations_dir() / "size.md", md);
  return rows;
}

}  // namespace hallubench::pipeline
