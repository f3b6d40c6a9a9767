// Prints one PASS/FAIL line per acceptance criterion and exits nonzero when
// any criterion fails.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "hallubench/annotate/annotation.hpp"
#include "hallubench/chem/properties.hpp"
#include "hallubench/chem/scaffold.hpp"
#include "hallubench/chem/smiles.hpp"
#include "hallubench/data/dataset.hpp"
#include "hallubench/data/split.hpp"
#include "hallubench/describe/description.hpp"
#include "hallubench/metrics/auc.hpp"
#include "hallubench/metrics/consistency.hpp"
#include "hallubench/metrics/kappa.hpp"
#include "hallubench/metrics/tables.hpp"
#include "hallubench/predict/decode.hpp"
#include "hallubench/predict/task.hpp"
#include "hallubench/util/error.hpp"
#include "support/chem_oracles.hpp"
#include "support/e2e_run.hpp"
#include "support/fake_transport.hpp"
#include "support/metric_oracles.hpp"
#include "support/synthetic_corpus.hpp"
#include "support/published_aucs.hpp"

using namespace hallubench;

namespace {

const std::string kFixtures = HB_FIXTURE_DIR;

// Collects failed expectations for one criterion.
class Gate {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& text) { notes_.push_back(text); }
  const std::vector<std::string>& failures() const { return failures_; }
  std::string summary() const {
    std::string out;
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::optional<ErrorCode> error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::string fixed(double v, int digits) { return format_fixed(v, digits); }

void delta_table_reproduction(Gate& g) {
  std::vector<metrics::RunResult> results;
  for (const auto& row : published::kRows) {
    std::map<std::string, double> per;
    for (std::size_t d = 0; d < 5; ++d) per[std::string(published::kDatasets[d])] = row.auc[d];
    results.push_back(metrics::make_run_result(std::string(row.model), std::string(row.setting), per));
  }
  const auto rows = metrics::delta_table(results, {"SMILES", "MolT5", "PubChem"});
  g.expect(rows.size() == 42, "expected 42 rows");
  double worst = 0.0;
  std::size_t compared = 0;
  auto compare = [&](const std::string& what, const std::optional<double>& got, const std::optional<double>& want) {
    if (got.has_value() != want.has_value()) {
      g.expect(false, what + " presence differs");
      return;
    }
    if (!got) return;
    const double diff = std::abs(*got - *want);
    worst = std::max(worst, diff);
    ++compared;
    g.expect(diff <= 0.04, what + " off by " + fixed(diff, 3));
  };
  for (std::size_t i = 0; i < rows.size() && i < published::kRows.size(); ++i) {
    const auto& want = published::kRows[i];
    const auto tag = std::string(want.model) + "/" + std::string(want.setting);
    compare(tag + " avg", rows[i].avg, want.avg);
    compare(tag + " dSMILES", rows[i].delta_smiles, want.delta_smiles);
    compare(tag + " dMolT5", rows[i].delta_molt5, want.delta_molt5);
    compare(tag + " dPubChem", rows[i].delta_pubchem, want.delta_pubchem);
  }
  auto find = [&](std::string_view model, std::string_view setting) -> const metrics::DeltaRow* {
    for (const auto& r : rows) {
      if (r.model == model && r.setting == setting) return &r;
    }
    return nullptr;
  };
  struct Anchor {
    std::string_view model, setting;
    int column;
    double value;
  };
  for (const Anchor& a : {Anchor{"Llama-3-8B", "MolT5", 0, -6.53}, Anchor{"Falcon3-Mamba-7B", "GPT-4o", 2, 8.22},
                          Anchor{"Llama-3.1-8B", "Llama-3", 0, 15.80}}) {
    const auto* r = find(a.model, a.setting);
    if (r == nullptr) {
      g.expect(false, "anchor row missing");
      continue;
    }
    const auto& d = a.column == 0 ? r->delta_smiles : a.column == 1 ? r->delta_molt5 : r->delta_pubchem;
    g.expect(d && std::abs(*d - a.value) <= 0.04, std::string(a.model) + "/" + std::string(a.setting) + " anchor");
    if (d) g.note(std::string(a.model) + "/" + std::string(a.setting) + " " + metrics::format_delta(*d));
  }
  g.note(std::to_string(compared) + " values, max deviation " + fixed(worst, 3));
}

void auc_oracle(Gate& g) {
  std::mt19937_64 rng(20240501);
  int exact = 0;
  for (int i = 0; i < 200; ++i) {
    const auto inst = oracle::random_auc_instance(rng);
    const double fast = metrics::roc_auc(inst.scores, inst.labels);
    const double slow = oracle::brute_force_auc(inst.scores, inst.labels);
    g.expect(inst.scores.size() <= 30, "instance larger than 30");
    if (fast == slow) ++exact;
  }
  g.expect(exact == 200, std::to_string(200 - exact) + " instances differ");
  const std::vector<double> s = {0.1, 0.4, 0.9};
  const std::vector<int> ones = {1, 1, 1}, zeros = {0, 0, 0};
  g.expect(error_of([&] { metrics::roc_auc(s, ones); }) == ErrorCode::UndefinedAUC, "all-positive input");
  g.expect(error_of([&] { metrics::roc_auc(s, zeros); }) == ErrorCode::UndefinedAUC, "all-negative input");
  g.note(std::to_string(exact) + "/200 exact; single class raises UndefinedAUC");
}

void scaffold_split(Gate& g) {
  const std::size_t n = 500;
  const auto records = synthetic::corpus(n, 7);
  const auto split = data::scaffold_split(records, {});
  std::vector<std::size_t> all;
  for (const auto* part : {&split.train, &split.valid, &split.test}) all.insert(all.end(), part->begin(), part->end());
  std::sort(all.begin(), all.end());
  bool exhaustive = all.size() == n;
  for (std::size_t i = 0; exhaustive && i < n; ++i) exhaustive = all[i] == i;
  g.expect(exhaustive, "partitions are not disjoint and exhaustive");

  std::map<std::size_t, std::string> key;
  std::map<std::string, std::size_t> group_size;
  for (const auto& r : records) ++group_size[key[r.row_index] = data::scaffold_group_key(r.smiles)];
  std::map<std::string, int> home;
  int crossings = 0;
  int p = 0;
  for (const auto* part : {&split.train, &split.valid, &split.test}) {
    for (auto row : *part) {
      const auto [it, inserted] = home.emplace(key[row], p);
      if (it->second != p) ++crossings;
    }
    ++p;
  }
  g.expect(crossings == 0, std::to_string(crossings) + " rows share a scaffold with another partition");
  std::size_t max_group = 0;
  for (const auto& [k, size] : group_size) max_group = std::max(max_group, size);
  const std::size_t target = n / 10;
  const auto diff = split.test.size() > target ? split.test.size() - target : target - split.test.size();
  g.expect(diff <= max_group, "test size " + std::to_string(split.test.size()) + " outside tolerance");

  std::vector<data::LabeledMolecule> ten;
  const std::vector<std::string> smiles = {"c1ccccc1", "Cc1ccccc1", "CCc1ccccc1", "Oc1ccccc1", "Nc1ccccc1",
                                           "C1CCCCC1", "CC1CCCCC1", "OC1CCCCC1", "c1ccncc1",  "Cc1ccncc1"};
  for (std::size_t i = 0; i < smiles.size(); ++i) ten.push_back({smiles[i], static_cast<int>(i % 2), i});
  const auto small = data::scaffold_split(ten, {});
  g.expect(small.train.size() == 8 && small.valid.empty() && small.test.size() == 2, "hand-traced example");
  g.note("n=500, " + std::to_string(group_size.size()) + " scaffolds, test=" + std::to_string(split.test.size()) +
         " (target " + std::to_string(target) + " +/- " + std::to_string(max_group) + "); 10-molecule example " +
         std::to_string(small.train.size()) + "/" + std::to_string(small.valid.size()) + "/" +
         std::to_string(small.test.size()));
}

void smiles_and_scaffolds(Gate& g) {
  const auto corpus = oracle::load_corpus(kFixtures + "/smiles_corpus.txt");
  g.expect(corpus.size() == 100, "corpus should hold 100 SMILES");
  int ok = 0;
  for (const auto& s : corpus) {
    const auto m = chem::parse_smiles(s);
    const auto c = chem::canonical_smiles(m);
    const auto back = chem::parse_smiles(c);
    if (oracle::isomorphic(m, back) && chem::canonical_smiles(back) == c) ++ok;
    else g.expect(false, "round trip failed for " + s);
  }
  const auto benzene = chem::canonical_smiles(chem::parse_smiles("c1ccccc1"));
  g.expect(chem::murcko_scaffold(chem::parse_smiles("c1ccccc1")).smiles == benzene, "benzene scaffold");
  g.expect(chem::murcko_scaffold(chem::parse_smiles("CCc1ccccc1")).smiles == benzene, "ethylbenzene scaffold");
  const auto ethanol = chem::murcko_scaffold(chem::parse_smiles("CCO"));
  g.expect(ethanol.is_empty && ethanol.smiles.empty(), "CCO scaffold should be empty");
  const auto aspirin = chem::parse_smiles("CC(=O)Oc1ccccc1C(=O)O");
  const auto formula = chem::molecular_formula(aspirin);
  const double weight = chem::molecular_weight(aspirin);
  g.expect(formula == "C9H8O4", "aspirin formula " + formula);
  g.expect(std::abs(weight - 180.16) <= 0.05, "aspirin weight " + fixed(weight, 3));
  g.note(std::to_string(ok) + "/" + std::to_string(corpus.size()) + " round trips; aspirin " + formula + " " +
         fixed(weight, 3));
}

void decode_fixtures(Gate& g) {
  const auto simple = predict::decode_yes_no({{"Yes", -0.1}, {"No", -2.3}});
  g.expect(simple.yes && std::abs(simple.p_yes - 0.9002) <= 0.0005, "simple fixture " + fixed(simple.p_yes, 4));
  const auto tie = predict::decode_yes_no({{"Yes", -1.0}, {"No", -1.0}});
  g.expect(!tie.yes && tie.p_yes == 0.5, "tie should be (No, 0.5)");
  const auto variants = predict::decode_yes_no({{"Yes", -1.0}, {" Yes", -0.5}, {"No", -2.0}, {" no", -3.0}});
  g.expect(std::abs(variants.p_yes - 0.8176) <= 0.0005, "variant fixture " + fixed(variants.p_yes, 4));

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> lp(-12.0, 0.0), shift(-20.0, 20.0);
  int invariant = 0;
  for (int i = 0; i < 1000; ++i) {
    const double y = lp(rng), n = lp(rng), c = shift(rng);
    const auto a = predict::decode_yes_no({{"Yes", y}, {"No", n}});
    const auto b = predict::decode_yes_no({{"Yes", y + c}, {"No", n + c}});
    if (a.yes == b.yes && std::abs(a.p_yes - b.p_yes) <= 1e-9) ++invariant;
  }
  g.expect(invariant == 1000, std::to_string(1000 - invariant) + " shifted pairs changed");
  g.note("p_yes " + fixed(simple.p_yes, 4) + ", tie No/0.5, variants " + fixed(variants.p_yes, 4) + ", " +
         std::to_string(invariant) + "/1000 shift-invariant");
}

void golden_prompts(Gate& g) {
  const auto dir = kFixtures + "/golden/";
  const auto inputs = Json::parse(read_file(dir + "inputs.json"));
  const auto smiles = inputs.at("smiles").get<std::string>();
  const auto description = inputs.at("description").get<std::string>();
  int matched = 0;
  auto check = [&](const llm::ChatPrompt& prompt, const std::string& name) {
    const bool ok = prompt.system == read_file(dir + name + ".system.txt") &&
                    prompt.user == read_file(dir + name + ".user.txt");
    g.expect(ok, name + " differs from its golden file");
    if (ok) ++matched;
  };
  using predict::Task;
  check(predict::build_task_prompt(smiles, description, Task::HIV), "task_hiv");
  check(predict::build_task_prompt(smiles, description, Task::BBBP), "task_bbbp");
  check(predict::build_task_prompt(smiles, description, Task::Clintox), "task_clintox");
  check(predict::build_task_prompt(smiles, description, Task::SIDER), "task_sider");
  check(predict::build_task_prompt(smiles, description, Task::Tox21), "task_tox21");
  check(describe::build_description_prompt(smiles), "description");
  check(annotate::build_annotation_prompt(smiles, description), "annotation");
  g.note(std::to_string(matched) + "/7 prompts byte-identical");
}

void fleiss(Gate& g) {
  const std::vector<std::string> ab = {"A", "B"};
  const double perfect = metrics::fleiss_kappa({{"A", "A", "A"}, {"B", "B", "B"}}, ab);
  g.expect(perfect == 1.0, "perfect agreement gave " + fixed(perfect, 6));
  const double hand = metrics::fleiss_kappa({{"A", "A", "B"}, {"B", "B", "B"}}, ab);
  g.expect(std::abs(hand - 0.25) <= 1e-9, "hand-computed case gave " + fixed(hand, 12));
  g.expect(error_of([&] { metrics::fleiss_kappa({{"A"}, {"B"}}, ab); }) == ErrorCode::TooFewRaters,
           "single rater should raise TooFewRaters");
  g.note("perfect " + fixed(perfect, 2) + ", hand case " + fixed(hand, 12) + ", single rater TooFewRaters");
}

void end_to_end(Gate& g) {
  const auto a_dir = e2e::fresh_dir("hallubench_acceptance", "run_a");
  const auto b_dir = e2e::fresh_dir("hallubench_acceptance", "run_b");
  const auto a = e2e::full_run(a_dir);
  e2e::full_run(b_dir);
  std::size_t files = 0;
  g.expect(e2e::same_outputs(a_dir, b_dir, &files), "two runs produced different JSONL");
  g.expect(files >= 10, "too few JSONL outputs");
  g.expect(a.predictions.size() == 4, "four settings expected");
  for (const auto& p : a.predictions) g.expect(p.auc_percent.has_value(), "a setting lacks ROC-AUC");
  const auto& pubchem = a.predictions.at(2);
  g.expect(a.pubchem.uncovered == 2, "PubChem should miss 2 molecules");
  g.expect(pubchem.predicted == 18 && std::abs(pubchem.coverage - 0.9) <= 1e-12, "PubChem coverage");
  const auto manifest = Json::parse(read_file(pipeline::manifest_path(pubchem.path)));
  g.expect(std::abs(manifest.at("coverage").get<double>() - 0.9) <= 1e-12, "coverage missing from manifest");
  g.expect(!a.report.files.empty(), "report wrote nothing");
  g.expect(a.annotated.annotated == a.annotated.inputs, "annotation dropped cases");

  const auto ledger_dir = e2e::fresh_dir("hallubench_acceptance", "synthetic");
  e2e::write_beneficial_ledger(ledger_dir, "synthetic");
  pipeline::Pipeline pipeline(e2e::config(ledger_dir), e2e::offline_environment());
  const auto mined = pipeline.mine("synthetic");
  bool all_full = !mined.result.cells.empty();
  for (const auto& [k, cell] : mined.result.cells) all_full = all_full && cell.percent() == 100.0;
  g.expect(all_full, "synthetic ledger should give 100% in every cell");
  g.note(std::to_string(files) + " JSONL files identical across runs; PubChem coverage " +
         fixed(100.0 * pubchem.coverage, 1) + "%; " + std::to_string(mined.result.cells.size()) +
         " synthetic cells at 100%");
}

void consistency_adapter(Gate& g) {
  auto transport = std::make_shared<fake::ScriptedTransport>();
  transport->push(200, R"({"score": 0.2089})");
  transport->push(200, R"({"score": 1.7})");
  metrics::HttpConsistencyScorer scorer("http://scorer.test/score", transport, {0, std::chrono::milliseconds(1)},
                                        [](std::chrono::milliseconds) {}, 1);
  const std::vector<metrics::ConsistencyPair> one = {{"CCO", "gen", "reference", "candidate"}};
  const auto first = metrics::consistency_scores(scorer, one);
  g.expect(std::abs(first.at(0).hallucination_score - 0.7911) <= 1e-9,
           "hallucination score " + fixed(first.at(0).hallucination_score, 6));
  g.expect(error_of([&] { metrics::consistency_scores(scorer, one); }) == ErrorCode::OutOfRange,
           "1.7 should raise OutOfRange");

  std::mt19937_64 rng(17);
  std::vector<int> delays(50);
  for (auto& d : delays) d = std::uniform_int_distribution<int>(0, 8)(rng);
  auto shuffled = std::make_shared<fake::HandlerTransport>([&](const net::HttpRequest& request) {
    const int i = std::stoi(Json::parse(request.body).at("hypothesis").get<std::string>());
    std::this_thread::sleep_for(std::chrono::milliseconds(delays[static_cast<std::size_t>(i)]));
    return net::HttpResponse{200, Json{{"score", i / 100.0}}.dump(), {}, {}};
  });
  metrics::HttpConsistencyScorer parallel("http://scorer.test/score", shuffled, {}, [](std::chrono::milliseconds) {},
                                          8);
  std::vector<metrics::ConsistencyPair> pairs;
  for (int i = 0; i < 50; ++i) pairs.push_back({"C" + std::to_string(i), "gen", "ref", std::to_string(i)});
  const auto scores = metrics::consistency_scores(parallel, pairs);
  bool ordered = scores.size() == 50;
  for (std::size_t i = 0; ordered && i < 50; ++i) {
    ordered = scores[i].smiles == "C" + std::to_string(i) && scores[i].consistency == static_cast<double>(i) / 100.0;
  }
  g.expect(ordered, "batch order not preserved");
  g.expect(shuffled->peak() > 1, "requests never overlapped");
  g.note("0.2089 -> " + fixed(first.at(0).hallucination_score, 4) + ", 1.7 -> OutOfRange, 50/50 in order (peak " +
         std::to_string(shuffled->peak()) + " in flight)");
}

void dataset_loading(Gate& g) {
  const auto sider_spec = data::preset_spec("SIDER");
  const auto tox_spec = data::preset_spec("Tox21");
  g.expect(sider_spec.label_column == "Reproductive system and breast disorders", "SIDER label column");
  g.expect(tox_spec.label_column == "SR-MMP", "Tox21 label column");
  const auto sider = data::load_dataset(kFixtures + "/datasets/sider_mini.csv", sider_spec);
  const auto tox = data::load_dataset(kFixtures + "/datasets/tox21_mini.csv", tox_spec);
  g.expect(sider.records.size() == 3 && sider.skipped_unparseable == 1, "SIDER fixture counts");
  g.expect(tox.records.size() == 3 && tox.skipped_unparseable == 1, "Tox21 fixture counts");
  g.expect(sider.records.at(1).label == 1, "SIDER label read from the wrong column");
  g.note("SIDER -> \"" + sider_spec.label_column + "\", Tox21 -> \"" + tox_spec.label_column + "\"; skipped " +
         std::to_string(sider.skipped_unparseable) + "+" + std::to_string(tox.skipped_unparseable) +
         " unparseable rows");
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  const std::vector<std::pair<std::string, std::function<void(Gate&)>>> criteria = {
      {"Baseline delta table reproduction", delta_table_reproduction},
      {"ROC-AUC oracle equivalence", auc_oracle},
      {"Scaffold-split properties", scaffold_split},
      {"SMILES round-trip and scaffold fixtures", smiles_and_scaffolds},
      {"Decode fixtures", decode_fixtures},
      {"Prompt golden files", golden_prompts},
      {"Fleiss' kappa", fleiss},
      {"End-to-end mock run", end_to_end},
      {"Consistency adapter", consistency_adapter},
      {"Dataset loading", dataset_loading},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Gate gate;
    try {
      criteria[i].second(gate);
    } catch (const std::exception& e) {
      gate.expect(false, std::string("threw ") + e.what());
    }
    const bool pass = gate.failures().empty();
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": ";
    if (pass) {
      std::cout << gate.summary() << "\n";
    } else {
      std::cout << gate.failures().size() << " problem(s), first: " << gate.failures().front() << "\n";
    }
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " acceptance criteria passed\n";
  return failed == 0 ? 0 : 1;
}
