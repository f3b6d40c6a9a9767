#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hallubench/annotate/annotation.hpp"
#include "hallubench/describe/description.hpp"
#include "hallubench/llm/gateway.hpp"
#include "hallubench/metrics/mining.hpp"
#include "hallubench/net/http.hpp"
#include "hallubench/pipeline/config.hpp"
#include "hallubench/pipeline/layout.hpp"

namespace hallubench::pipeline {

// Outside-world dependencies, swapped for fixtures in tests.
struct Environment {
  std::shared_ptr<net::HttpTransport> transport;
  Clock clock;
  Sleeper sleeper;
};

Environment default_environment();

struct DescribeSummary {
  std::filesystem::path path;
  std::size_t molecules = 0;  // evaluation rows
  std::size_t written = 0;
  std::size_t reused = 0;      // already present from an earlier run
  std::size_t uncovered = 0;   // PubChem or the reference file had nothing
  std::size_t failed = 0;
};

struct PredictSummary {
  std::filesystem::path path;
  std::size_t total = 0;
  std::size_t predicted = 0;
  std::size_t excluded = 0;
  std::size_t skipped = 0;
  std::size_t degraded = 0;
  double coverage = 0.0;
  std::optional<double> auc_percent;  // empty when the evaluated rows hold one class
};

struct ReportSummary {
  std::vector<std::filesystem::path> files;
  std::size_t ledger_rows = 0;
  std::size_t predictors = 0;
};

struct MineSummary {
  std::filesystem::path cases_path;
  metrics::MiningResult result;
};

struct AnnotateSummary {
  std::filesystem::path path;
  std::size_t inputs = 0;
  std::size_t annotated = 0;
  std::size_t failed = 0;
  std::map<annotate::HallucinationType, double> distribution;
};

struct ConsistencySummary {
  std::filesystem::path path;
  std::size_t pairs = 0;
  double mean_consistency = 0.0;
  double mean_hallucination = 0.0;
};

struct TemperatureRow {
  double temperature = 0.0;
  std::optional<double> avg_auc;
  std::optional<double> avg_hallucination_score;
};

struct SizeRow {
  std::string predictor;
  std::string setting;
  std::map<std::string, double> per_dataset_auc;
  std::optional<double> avg;
};

class Pipeline {
 public:
  Pipeline(RunConfig config, Environment env);

  const RunConfig& config() const noexcept { return config_; }
  const OutputLayout& layout() const noexcept { return layout_; }

  // Writes one description per evaluation molecule for a MolT5, PubChem or
  // generated source. Earlier records with the same generator parameters are
  // kept, so an interrupted run resumes without duplicates.
  DescribeSummary describe(const std::string& dataset, const Setting& source);

  // Throws MissingDescriptions when the setting's description file is absent.
  PredictSummary predict(const std::string& dataset, const std::string& predictor, const Setting& setting);

  // Tables and charts from persisted files only. Throws EmptyLedger.
  ReportSummary report();

  MineSummary mine(const std::string& predictor);

  // `cases` holds beneficial cases or description records; the default is
  // the predictor's mining output.
  AnnotateSummary annotate(const std::string& predictor, const std::optional<std::filesystem::path>& cases = {});

  // Scores a generator's descriptions against the MolT5 references.
  ConsistencySummary score_consistency(const std::string& dataset, const std::string& generator);

  std::vector<TemperatureRow> ablate_temperature(const std::vector<std::string>& datasets,
                                                 const std::string& generator, const std::string& predictor,
                                                 const std::vector<double>& temperatures);

  std::vector<SizeRow> ablate_size(const std::vector<std::string>& predictors, const std::vector<std::string>& datasets,
                                   const std::vector<Setting>& settings);

 private:
  struct EvaluationSet {
    std::string name;
    std::vector<data::LabeledMolecule> molecules;
    std::size_t total_rows = 0;
    std::size_t skipped = 0;
  };

  const EvaluationSet& evaluation_set(const std::string& dataset);
  llm::Gateway& gateway(const std::string& backend);
  std::shared_ptr<llm::ResponseCache> cache(const std::string& name);
  std::map<std::string, describe::DescriptionRecord> read_descriptions(const std::filesystem::path& path) const;
  void write_manifest(const std::filesystem::path& data_file, Json body) const;

  RunConfig config_;
  Environment env_;
  OutputLayout layout_;
  std::mutex mutex_;
  std::map<std::string, EvaluationSet> evaluation_sets_;
  std::map<std::string, std::shared_ptr<llm::Gateway>> gateways_;
  std::map<std::string, std::shared_ptr<llm::ResponseCache>> caches_;
};

}  // namespace hallubench::pipeline
