#include <CLI11.hpp>

#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "hallubench/pipeline/pipeline.hpp"
#include "hallubench/util/error.hpp"

namespace hb = hallubench;
using hb::pipeline::Setting;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string backend;
  std::vector<std::string> settings;
  std::string out;
  std::string log_level = "info";
  std::vector<std::string> datasets;
  std::vector<std::string> sources;
  std::vector<std::string> predictors;
  std::string generator;
  std::string cases;
  std::vector<double> temperatures;
};

hb::pipeline::RunConfig build_config(const Options& o) {
  auto config = hb::pipeline::load_config(o.config);
  if (o.seed) {
    config.seed = *o.seed;
    for (auto& [name, backend] : config.backends) backend.seed = *o.seed;
  }
  if (!o.out.empty()) config.output_dir = o.out;
  if (!o.backend.empty()) {
    if (!config.backends.contains(o.backend)) {
      throw hb::Error(hb::ErrorCode::ConfigError, "--backend names undefined backend '" + o.backend + "'");
    }
    for (auto* models : {&config.generators, &config.predictors}) {
      for (auto& m : *models) m.backend = o.backend;
    }
    if (config.annotator) config.annotator->backend = o.backend;
  }
  if (!o.settings.empty()) {
    config.settings.clear();
    for (const auto& s : o.settings) config.settings.push_back(hb::pipeline::parse_setting(s));
  }
  config.validate();
  return config;
}

std::vector<std::string> or_all_datasets(const std::vector<std::string>& chosen, const hb::pipeline::RunConfig& c) {
  if (!chosen.empty()) return chosen;
  std::vector<std::string> all;
  for (const auto& d : c.datasets) all.push_back(d.spec.name);
  return all;
}

std::vector<std::string> or_all_predictors(const std::vector<std::string>& chosen, const hb::pipeline::RunConfig& c) {
  if (!chosen.empty()) return chosen;
  std::vector<std::string> all;
  for (const auto& p : c.predictors) all.push_back(p.name);
  return all;
}

std::string percent(double v) { return hb::format_fixed(100.0 * v, 1) + "%"; }

int run(const std::string& command, const Options& o) {
  hb::pipeline::Pipeline pipeline(build_config(o), hb::pipeline::default_environment());
  const auto& config = pipeline.config();
  hb::pipeline::OutputLock lock(pipeline.layout());

  if (command == "describe") {
    std::vector<Setting> sources;
    if (o.sources.empty()) {
      for (const auto& s : config.settings) {
        if (s.kind != Setting::Kind::Smiles) sources.push_back(s);
      }
    } else {
      for (const auto& s : o.sources) sources.push_back(hb::pipeline::parse_setting(s));
    }
    for (const auto& d : or_all_datasets(o.datasets, config)) {
      for (const auto& s : sources) {
        const auto r = pipeline.describe(d, s);
        std::cout << d << "\t" << s.slug() << "\t" << r.written << "/" << r.molecules << " described, " << r.reused
                  << " reused, " << r.uncovered << " uncovered, " << r.failed << " failed\t" << r.path.string()
                  << "\n";
      }
    }
  } else if (command == "predict") {
    for (const auto& p : or_all_predictors(o.predictors, config)) {
      for (const auto& d : or_all_datasets(o.datasets, config)) {
        for (const auto& s : config.settings) {
          const auto r = pipeline.predict(d, p, s);
          std::cout << p << "\t" << d << "\t" << s.slug() << "\tROC-AUC "
                    << (r.auc_percent ? hb::format_fixed(*r.auc_percent, 2) : std::string("undefined"))
                    << "\tcoverage " << percent(r.coverage) << "\t" << r.predicted << " predicted, " << r.skipped
                    << " skipped\n";
        }
      }
    }
  } else if (command == "report") {
    const auto r = pipeline.report();
    for (const auto& f : r.files) std::cout << f.string() << "\n";
  } else if (command == "mine") {
    for (const auto& p : or_all_predictors(o.predictors, config)) {
      const auto r = pipeline.mine(p);
      std::cout << p << "\t" << r.result.cases.size() << " beneficial cases\t" << r.cases_path.string() << "\n";
      std::cout << hb::metrics::render_proportions_markdown(r.result);
    }
  } else if (command == "annotate") {
    std::optional<std::filesystem::path> cases;
    if (!o.cases.empty()) cases = o.cases;
    std::string name;
    if (!o.predictors.empty()) {
      name = o.predictors.front();
    } else if (cases) {
      name = cases->stem().string();
    } else {
      throw hb::Error(hb::ErrorCode::ConfigError, "annotate needs --predictor or --cases");
    }
    const auto r = pipeline.annotate(name, cases);
    std::cout << r.annotated << "/" << r.inputs << " annotated, " << r.failed << " skipped\t" << r.path.string()
              << "\n";
    for (const auto& [type, share] : r.distribution) {
      std::cout << hb::annotate::display_name(type) << "\t" << percent(share) << "\n";
    }
  } else if (command == "score-consistency") {
    if (o.generator.empty()) throw hb::Error(hb::ErrorCode::ConfigError, "score-consistency needs --generator");
    for (const auto& d : or_all_datasets(o.datasets, config)) {
      const auto r = pipeline.score_consistency(d, o.generator);
      std::cout << o.generator << "\t" << d << "\t" << r.pairs << " pairs\tconsistency "
                << hb::format_fixed(r.mean_consistency, 4) << "\thallucination score "
                << hb::format_fixed(r.mean_hallucination, 4) << "\n";
    }
  } else if (command == "ablate-temperature") {
    if (o.generator.empty() || o.predictors.size() != 1) {
      throw hb::Error(hb::ErrorCode::ConfigError, "ablate-temperature needs --generator and one --predictor");
    }
    const auto rows = pipeline.ablate_temperature(o.datasets, o.generator, o.predictors.front(), o.temperatures);
    std::cout << "temperature\tavg_auc\tavg_hallucination_score\n";
    for (const auto& r : rows) {
      std::cout << hb::format_fixed(r.temperature, 2) << "\t"
                << (r.avg_auc ? hb::format_fixed(*r.avg_auc, 2) : "n/a") << "\t"
                << (r.avg_hallucination_score ? hb::format_fixed(*r.avg_hallucination_score, 4) : "n/a") << "\n";
    }
  } else if (command == "ablate-size") {
    const auto rows = pipeline.ablate_size(o.predictors, o.datasets, {});
    for (const auto& r : rows) {
      std::cout << r.predictor << "\t" << r.setting << "\t" << (r.avg ? hb::format_fixed(*r.avg, 2) : "n/a") << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Molecular property prediction with LLM-written descriptions"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options o;
  app.add_option("-c,--config", o.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Override the split and mock seed");
  app.add_option("--backend", o.backend, "Run every model against this configured backend");
  app.add_option("--setting", o.settings, "Settings to evaluate (smiles, molt5, pubchem, llm:<generator>)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--log-level", o.log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  auto* describe = app.add_subcommand("describe", "Write descriptions for each evaluation molecule");
  describe->add_option("--dataset", o.datasets, "Datasets (default: all configured)");
  describe->add_option("--source", o.sources, "molt5, pubchem or llm:<generator> (default: configured settings)");

  auto* predict = app.add_subcommand("predict", "Run the yes/no property prompts and record ROC-AUC");
  predict->add_option("--dataset", o.datasets, "Datasets (default: all configured)");
  predict->add_option("--predictor", o.predictors, "Predictors (default: all configured)");

  app.add_subcommand("report", "Render tables and charts from the results ledger");

  auto* mine = app.add_subcommand("mine", "Find predictions improved by hallucinated descriptions");
  mine->add_option("--predictor", o.predictors, "Predictors (default: all configured)");

  auto* annotate = app.add_subcommand("annotate", "Label hallucination types with the configured annotator");
  annotate->add_option("--predictor", o.predictors, "Annotate this predictor's mined cases")->expected(1);
  annotate->add_option("--cases", o.cases, "Beneficial cases or description records (JSONL)");

  auto* consistency = app.add_subcommand("score-consistency", "Score generated descriptions against MolT5");
  consistency->add_option("--dataset", o.datasets, "Datasets (default: all configured)");
  consistency->add_option("--generator", o.generator, "Generator whose descriptions are scored")->required();

  auto* temperature = app.add_subcommand("ablate-temperature", "Describe and predict across temperatures");
  temperature->add_option("--temps", o.temperatures, "Temperatures, e.g. 0.1,0.5,0.9")->delimiter(',')->required();
  temperature->add_option("--generator", o.generator, "Generator to vary")->required();
  temperature->add_option("--predictor", o.predictors, "Predictor")->expected(1)->required();
  temperature->add_option("--dataset", o.datasets, "Datasets (default: all configured)");

  auto* size = app.add_subcommand("ablate-size", "Compare predictors over the configured settings");
  size->add_option("--predictors", o.predictors, "Predictors (default: all configured)")->delimiter(',');
  size->add_option("--dataset", o.datasets, "Datasets (default: all configured)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hb::exit_code(hb::ErrorCode::ConfigError);
  }

  auto logger = spdlog::stderr_color_mt("hallubench");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(o.log_level));

  const auto command = app.get_subcommands().front()->get_name();
  try {
    return run(command, o);
  } catch (const hb::Error& e) {
    spdlog::error("{}", e.what());
    return hb::exit_code(e.code());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
