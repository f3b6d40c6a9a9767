#include <algorithm>
#include <array>
#include <set>

#include <spdlog/spdlog.h>

#include "hallubench/data/csv.hpp"
#include "hallubench/metrics/tables.hpp"
#include "hallubench/pipeline/charts.hpp"
#include "hallubench/pipeline/pipeline.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::pipeline {

namespace {

namespace fs = std::filesystem;

std::vector<fs::path> sorted_entries(const fs::path& dir, bool directories) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (directories ? e.is_directory() : e.is_regular_file()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_data_file(const fs::path& p) {
  return p.extension() == ".jsonl" && !p.filename().string().ends_with(".manifest.json");
}

std::vector<predict::PredictionRecord> load_predictions(const fs::path& predictor_dir) {
  std::vector<predict::PredictionRecord> out;
  for (const auto& dataset_dir : sorted_entries(predictor_dir, true)) {
    for (const auto& file : sorted_entries(dataset_dir, false)) {
      if (!is_data_file(file)) continue;
      for (const auto& row : read_jsonl(file).rows) out.push_back(predict::prediction_from_json(row));
    }
  }
  return out;
}

bool is_baseline(const std::string& setting) {
  return setting == "smiles" || setting == "molt5" || setting == "pubchem";
}

std::string percent(double share) { return format_fixed(100.0 * share, 1); }

std::string distribution_csv(const std::map<annotate::HallucinationType, double>& dist, std::size_t n) {
  std::string csv = "type,share,percent,count\n";
  for (auto t : annotate::kAllTypes) {
    const auto it = dist.find(t);
    const double share = it == dist.end() ? 0.0 : it->second;
    csv += data::csv_escape(std::string(annotate::display_name(t))) + "," + format_fixed(share, 4) + "," +
           percent(share) + "," + std::to_string(static_cast<std::size_t>(share * static_cast<double>(n) + 0.5)) +
           "\n";
  }
  return csv;
}

std::string distribution_markdown(const std::map<annotate::HallucinationType, double>& dist, std::size_t n) {
  std::string md = "| Type | Share (%) |\n|---|---:|\n";
  for (auto t : annotate::kAllTypes) {
    const auto it = dist.find(t);
    md += "| " + std::string(annotate::display_name(t)) + " | " + percent(it == dist.end() ? 0.0 : it->second) +
          " |\n";
  }
  md += "\n" + std::to_string(n) + " annotated descriptions, counted by primary type.\n";
  return md;
}

std::vector<PieSlice> distribution_slices(const std::map<annotate::HallucinationType, double>& dist) {
  std::vector<PieSlice> slices;
  for (auto t : annotate::kAllTypes) {
    if (auto it = dist.find(t); it != dist.end() && it->second > 0.0) {
      slices.push_back({std::string(annotate::display_name(t)), it->second});
    }
  }
  return slices;
}

}  // namespace

MineSummary Pipeline::mine(const std::string& predictor) {
  const auto dir = layout_.predictions_dir(predictor);
  const auto records = load_predictions(dir);
  if (records.empty()) {
    throw Error(ErrorCode::MissingBaseline, "no predictions under " + dir.string() + "; run `predict` first");
  }
  MineSummary summary;
  summary.result = metrics::mine_beneficial(records);
  const auto out = layout_.mining_dir(predictor);
  summary.cases_path = out / "beneficial.jsonl";

  std::vector<Json> rows;
  for (const auto& c : summary.result.cases) rows.push_back(metrics::to_json(c));
  write_file_atomic(summary.cases_path, to_jsonl(rows));
  write_file_atomic(out / "proportions.md", metrics::render_proportions_markdown(summary.result));
  write_file_atomic(out / "proportions.csv", metrics::render_proportions_csv(summary.result));
  write_manifest(summary.cases_path, Json{{"command", "mine"},
                                          {"predictor", predictor},
                                          {"predictions", records.size()},
                                          {"groups", summary.result.groups},
                                          {"incomplete_groups", summary.result.incomplete_groups},
                                          {"beneficial", summary.result.cases.size()}});
  if (summary.result.incomplete_groups > 0) {
    spdlog::warn("mine {}: {} molecule groups lacked a SMILES or MolT5 baseline and were skipped", predictor,
                 summary.result.incomplete_groups);
  }
  spdlog::info("mine {}: {} beneficial cases over {} molecule groups", predictor, summary.result.cases.size(),
               summary.result.groups);
  return summary;
}

AnnotateSummary Pipeline::annotate(const std::string& name, const std::optional<fs::path>& cases) {
  if (!config_.annotator) throw Error(ErrorCode::ConfigError, "no \"annotator\" is configured");
  const auto& annotator = *config_.annotator;
  for (const auto& g : config_.generators) {
    if (g.backend == annotator.backend && g.params.model == annotator.params.model) {
      spdlog::warn("annotator model {} is also the generator {}; its labels may be biased toward its own text",
                   annotator.params.model, g.name);
    }
  }

  const auto cases_path = cases.value_or(layout_.mining_dir(name) / "beneficial.jsonl");
  if (!fs::exists(cases_path)) {
    throw Error(ErrorCode::FileUnreadable, cases_path.string() + " does not exist; run `mine` first or pass --cases");
  }
  struct Origin {
    std::string dataset, source;
  };
  std::vector<annotate::AnnotationInput> inputs;
  std::vector<Origin> origins;
  std::map<fs::path, std::map<std::string, describe::DescriptionRecord>> description_files;
  std::size_t unmatched = 0;
  for (const auto& row : read_jsonl(cases_path).rows) {
    if (row.contains("hallucination_source")) {
      const auto c = metrics::beneficial_from_json(row);
      const auto file = layout_.descriptions(c.dataset, c.hallucination_source);
      auto it = description_files.find(file);
      if (it == description_files.end()) it = description_files.emplace(file, read_descriptions(file)).first;
      const auto d = it->second.find(c.smiles);
      if (d == it->second.end()) {
        ++unmatched;
        continue;
      }
      inputs.push_back({c.smiles, d->second.text});
      origins.push_back({c.dataset, c.hallucination_source});
    } else {
      const auto d = describe::description_from_json(row);
      if (d.text.empty()) continue;
      inputs.push_back({d.smiles, d.text});
      origins.push_back({"", std::string(describe::to_string(d.source))});
    }
  }
  if (unmatched > 0) spdlog::warn("annotate {}: {} cases had no stored description and were skipped", name, unmatched);

  const auto batch = annotate::annotate_batch(gateway(annotator.backend), inputs, annotator.params);

  AnnotateSummary summary;
  const auto out = layout_.annotations_dir(name);
  summary.path = out / "annotations.jsonl";
  summary.inputs = inputs.size();
  summary.annotated = batch.records.size();
  summary.failed = batch.failed.size();

  std::vector<Json> rows;
  std::size_t next = 0;
  std::set<std::size_t> failed_indices;
  for (const auto& f : batch.failed) failed_indices.insert(f.index);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (failed_indices.contains(i)) continue;
    auto row = annotate::to_json(batch.records[next++]);
    if (!origins[i].dataset.empty()) row["dataset"] = origins[i].dataset;
    row["source"] = origins[i].source;
    rows.push_back(std::move(row));
  }
  write_file_atomic(summary.path, to_jsonl(rows));
  if (!batch.records.empty()) summary.distribution = annotate::type_distribution(batch.records);
  write_file_atomic(out / "distribution.csv", distribution_csv(summary.distribution, summary.annotated));
  write_file_atomic(out / "distribution.md", distribution_markdown(summary.distribution, summary.annotated));

  Json failed = Json::array();
  for (const auto& f : batch.failed) failed.push_back({{"index", f.index}, {"smiles", f.smiles}, {"reason", f.reason}});
  write_manifest(summary.path, Json{{"command", "annotate"},
                                    {"cases", cases_path.string()},
                                    {"annotator", annotator.name},
                                    {"model", annotator.params.model},
                                    {"inputs", summary.inputs},
                                    {"annotated", summary.annotated},
                                    {"failed", failed}});
  spdlog::info("annotate {}: {} of {} descriptions annotated, {} skipped", name, summary.annotated, summary.inputs,
               summary.failed);
  return summary;
}

ReportSummary Pipeline::report() {
  const auto ledger_path = layout_.results();
  if (!fs::exists(ledger_path)) throw Error(ErrorCode::EmptyLedger, ledger_path.string() + " does not exist");
  const auto ledger = read_jsonl(ledger_path);
  if (ledger.rows.empty()) throw Error(ErrorCode::EmptyLedger, ledger_path.string() + " holds no results");

  ReportSummary summary;
  summary.ledger_rows = ledger.rows.size();

  // predictor -> setting -> dataset -> auc, later rows replacing earlier ones.
  std::vector<std::string> predictor_order;
  std::map<std::string, std::vector<std::string>> setting_order;
  std::map<std::string, std::map<std::string, std::map<std::string, double>>> grid;
  for (const auto& row : ledger.rows) {
    const auto predictor = row.at("predictor").get<std::string>();
    const auto setting = row.at("setting").get<std::string>();
    const auto dataset = row.at("dataset").get<std::string>();
    if (std::find(predictor_order.begin(), predictor_order.end(), predictor) == predictor_order.end()) {
      predictor_order.push_back(predictor);
    }
    auto& settings = setting_order[predictor];
    if (std::find(settings.begin(), settings.end(), setting) == settings.end()) settings.push_back(setting);
    auto& cell = grid[predictor][setting];
    if (row.at("auc").is_null()) {
      cell.erase(dataset);
    } else {
      cell[dataset] = row.at("auc").get<double>();
    }
  }

  std::vector<metrics::DeltaRow> table;
  for (const auto& predictor : predictor_order) {
    std::vector<std::string> settings;
    for (const char* b : {"smiles", "molt5", "pubchem"}) {
      if (grid[predictor].contains(b)) settings.push_back(b);
    }
    for (const auto& s : setting_order[predictor]) {
      if (!is_baseline(s)) settings.push_back(s);
    }
    std::vector<metrics::RunResult> results;
    for (const auto& s : settings) {
      if (!grid[predictor][s].empty()) results.push_back(metrics::make_run_result(predictor, s, grid[predictor][s]));
    }
    try {
      auto rows = metrics::delta_table(results);
      table.insert(table.end(), rows.begin(), rows.end());
      ++summary.predictors;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingBaseline) throw;
      spdlog::warn("report: skipping predictor {} ({})", predictor, e.detail());
    }
  }

  const auto dir = layout_.reports_dir();
  auto emit = [&](const std::string& file, const std::string& content) {
    write_file_atomic(dir / file, content);
    summary.files.push_back(dir / file);
  };
  std::string report_md = "# Results\n";

  if (!table.empty()) {
    const auto md = metrics::render_markdown(table);
    emit("delta_table.md", md);
    emit("delta_table.csv", metrics::render_csv(table));
    report_md += "\n## ROC-AUC (%) by setting\n\n" + md;

    // Average improvement per hallucination source across predictors.
    std::vector<std::string> sources;
    std::map<std::string, std::array<std::vector<double>, 3>> deltas;
    for (const auto& r : table) {
      if (is_baseline(r.setting)) continue;
      if (!deltas.contains(r.setting)) sources.push_back(r.setting);
      auto& d = deltas[r.setting];
      d[0].push_back(*r.delta_smiles);
      d[1].push_back(*r.delta_molt5);
      d[2].push_back(*r.delta_pubchem);
    }
    if (!sources.empty()) {
      auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
      };
      std::string csv = "source,predictors,delta_smiles,delta_molt5,delta_pubchem\n";
      std::string md_imp = "| Source | Predictors | ΔSMILES | ΔMolT5 | ΔPubChem |\n|---|---:|---:|---:|---:|\n";
      std::array<BarSeries, 3> series{BarSeries{"vs SMILES", {}}, BarSeries{"vs MolT5", {}},
                                      BarSeries{"vs PubChem", {}}};
      for (const auto& s : sources) {
        const auto& d = deltas[s];
        const auto n = std::to_string(d[0].size());
        csv += data::csv_escape(s) + "," + n;
        md_imp += "| " + s + " | " + n;
        for (std::size_t k = 0; k < 3; ++k) {
          const double m = mean(d[k]);
          csv += "," + format_fixed(m, 4);
          md_imp += " | " + metrics::format_delta(m);
          series[k].values.push_back(m);
        }
        csv += "\n";
        md_imp += " |\n";
      }
      emit("improvement.csv", csv);
      emit("improvement.svg", bar_chart_svg("Average improvement in ROC-AUC per hallucination source", sources,
                                            {series.begin(), series.end()}, "ROC-AUC difference (points)"));
      report_md += "\n## Average improvement per hallucination source\n\n" + md_imp;
    }
  } else {
    spdlog::warn("report: no predictor has all three baselines; the delta table is empty");
  }

  for (const auto& predictor_dir : sorted_entries(layout_.root() / "predictions", true)) {
    const auto predictor = predictor_dir.filename().string();
    try {
      const auto result = metrics::mine_beneficial(load_predictions(predictor_dir));
      const auto md = metrics::render_proportions_markdown(result);
      emit("beneficial_" + safe_name(predictor) + ".md", md);
      emit("beneficial_" + safe_name(predictor) + ".csv", metrics::render_proportions_csv(result));
      report_md += "\n## Beneficial hallucinations (%), " + predictor + "\n\n" + md;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingBaseline) throw;
    }
  }

  for (const auto& annotation_dir : sorted_entries(layout_.root() / "annotations", true)) {
    const auto file = annotation_dir / "annotations.jsonl";
    if (!fs::exists(file)) continue;
    std::vector<annotate::AnnotationRecord> records;
    for (const auto& row : read_jsonl(file).rows) records.push_back(annotate::annotation_from_json(row));
    if (records.empty()) continue;
    const auto dist = annotate::type_distribution(records);
    const auto name = safe_name(annotation_dir.filename().string());
    emit("types_" + name + ".csv", distribution_csv(dist, records.size()));
    emit("types_" + name + ".svg", pie_chart_svg("Hallucination types, " + name, distribution_slices(dist)));
    report_md += "\n## Hallucination types, " + name + "\n\n" + distribution_markdown(dist, records.size());
  }

  // Mean consistency per generator and dataset, in percent.
  std::map<std::string, std::map<std::string, double>> consistency;
  std::set<std::string> consistency_datasets;
  for (const auto& generator_dir : sorted_entries(layout_.consistency_dir(), true)) {
    for (const auto& file : sorted_entries(generator_dir, false)) {
      if (!is_data_file(file)) continue;
      const auto rows = read_jsonl(file).rows;
      if (rows.empty()) continue;
      double sum = 0.0;
      for (const auto& r : rows) sum += r.at("consistency").get<double>();
      const auto dataset = file.stem().string();
      consistency[generator_dir.filename().string()][dataset] = 100.0 * sum / static_cast<double>(rows.size());
      consistency_datasets.insert(dataset);
    }
  }
  if (!consistency.empty()) {
    const auto columns = metrics::order_datasets({consistency_datasets.begin(), consistency_datasets.end()});
    std::string md = "| Generator |", csv = "generator";
    for (const auto& d : columns) {
      md += " " + d + " |";
      csv += "," + data::csv_escape(d);
    }
    md += " Avg |\n|---|";
    csv += ",avg\n";
    for (std::size_t i = 0; i <= columns.size(); ++i) md += "---:|";
    md += "\n";
    for (const auto& [generator, per_dataset] : consistency) {
      md += "| " + generator + " |";
      csv += data::csv_escape(generator);
      double sum = 0.0;
      for (const auto& d : columns) {
        const auto it = per_dataset.find(d);
        if (it == per_dataset.end()) {
          md += " n/a |";
          csv += ",";
          continue;
        }
        sum += it->second;
        md += " " + format_fixed(it->second, 2) + " |";
        csv += "," + format_fixed(it->second, 2);
      }
      const double avg = sum / static_cast<double>(per_dataset.size());
      md += " " + format_fixed(avg, 2) + " |\n";
      csv += "," + format_fixed(avg, 2) + "\n";
    }
    emit("consistency.md", md);
    emit("consistency.csv", csv);
    report_md += "\n## Factual consistency with MolT5 references (%)\n\n" + md;
  }

  emit("report.md", report_md);
  spdlog::info("report: {} ledger rows, {} predictors, {} files under {}", summary.ledger_rows, summary.predictors,
               summary.files.size(), dir.string());
  return summary;
}

}  // namespace hallubench::pipeline
