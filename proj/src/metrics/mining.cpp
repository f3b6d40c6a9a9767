#include "hallubench/metrics/mining.hpp"

#include <algorithm>
#include <optional>
#include <tuple>

#include "hallubench/data/csv.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::metrics {

namespace {

bool same_name(std::string_view a, std::string_view b) { return to_lower(a) == to_lower(b); }

}  // namespace

Json to_json(const BeneficialCase& c) {
  return Json{{"smiles", c.smiles},
              {"row_index", c.row_index},
              {"dataset", c.dataset},
              {"hallucination_source", c.hallucination_source},
              {"p_true_hallu", c.p_true_hallu},
              {"max_p_true_baseline", c.max_p_true_baseline}};
}

BeneficialCase beneficial_from_json(const Json& j) {
  try {
    return BeneficialCase{j.at("smiles").get<std::string>(),
                          j.value("row_index", std::size_t{0}),
                          j.at("dataset").get<std::string>(),
                          j.at("hallucination_source").get<std::string>(),
                          j.at("p_true_hallu").get<double>(),
                          j.at("max_p_true_baseline").get<double>()};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MissingField, std::string("beneficial case: ") + e.what());
  }
}

double p_true(const predict::PredictionRecord& r) noexcept { return r.true_label == 1 ? r.p_yes : r.p_no; }

double CellCount::percent() const noexcept {
  return evaluated == 0 ? 0.0 : 100.0 * static_cast<double>(beneficial) / static_cast<double>(evaluated);
}

MiningResult mine_beneficial(const std::vector<predict::PredictionRecord>& records, const MiningOptions& options) {
  const auto& names = options.baselines;
  auto is_baseline = [&](const std::string& setting) {
    return same_name(setting, names.smiles) || same_name(setting, names.molt5) || same_name(setting, names.pubchem);
  };

  std::map<std::pair<std::string, std::string>, std::vector<const predict::PredictionRecord*>> groups;
  bool any_hallucinated = false;
  for (const auto& r : records) {
    groups[{r.dataset, r.smiles}].push_back(&r);
    any_hallucinated = any_hallucinated || !is_baseline(r.setting);
  }
  if (!any_hallucinated) throw Error(ErrorCode::MissingBaseline, "no hallucinated predictions to compare");

  MiningResult result;
  for (const auto& [key, members] : groups) {
    std::optional<double> smiles, molt5, pubchem;
    std::vector<const predict::PredictionRecord*> hallucinated;
    for (const auto* r : members) {
      if (same_name(r->setting, names.smiles)) {
        smiles = p_true(*r);
      } else if (same_name(r->setting, names.molt5)) {
        molt5 = p_true(*r);
      } else if (same_name(r->setting, names.pubchem)) {
        pubchem = p_true(*r);
      } else {
        hallucinated.push_back(r);
      }
    }
    if (hallucinated.empty()) continue;
    ++result.groups;
    if (!smiles || !molt5 || (options.require_pubchem && !pubchem)) {
      ++result.incomplete_groups;
      continue;
    }
    const double best = std::max({*smiles, *molt5, pubchem.value_or(0.0)});
    for (const auto* r : hallucinated) {
      auto& cell = result.cells[{r->setting, r->dataset}];
      ++cell.evaluated;
      const bool correct = r->predicted_yes == (r->true_label == 1);
      if (correct && p_true(*r) > best) {
        ++cell.beneficial;
        result.cases.push_back({r->smiles, r->row_index, r->dataset, r->setting, p_true(*r), best});
      }
    }
  }
  if (result.groups == result.incomplete_groups) {
    throw Error(ErrorCode::MissingBaseline, "no molecule has both SMILES and MolT5 baseline predictions");
  }
  std::sort(result.cases.begin(), result.cases.end(), [](const BeneficialCase& a, const BeneficialCase& b) {
    return std::tie(a.dataset, a.hallucination_source, a.row_index, a.smiles) <
           std::tie(b.dataset, b.hallucination_source, b.row_index, b.smiles);
  });
  return result;
}

namespace {

struct ProportionGrid {
  std::vector<std::string> sources;
  std::vector<std::string> datasets;
};

ProportionGrid grid_of(const MiningResult& result) {
  ProportionGrid grid;
  std::vector<std::string> datasets;
  for (const auto& [key, cell] : result.cells) {
    if (std::find(grid.sources.begin(), grid.sources.end(), key.first) == grid.sources.end()) {
      grid.sources.push_back(key.first);
    }
    datasets.push_back(key.second);
  }
  grid.datasets = order_datasets(std::move(datasets));
  return grid;
}

// Row cells (empty where the source has no predictions) and the row mean.
std::pair<std::vector<std::string>, std::string> row_of(const MiningResult& result, const ProportionGrid& grid,
                                                        const std::string& source) {
  std::vector<std::string> cells;
  double sum = 0.0;
  int present = 0;
  for (const auto& d : grid.datasets) {
    const auto it = result.cells.find({source, d});
    if (it == result.cells.end()) {
      cells.emplace_back();
      continue;
    }
    sum += it->second.percent();
    ++present;
    cells.push_back(format_fixed(it->second.percent(), 1));
  }
  return {cells, present == 0 ? std::string() : format_fixed(sum / present, 1)};
}

}  // namespace

std::string render_proportions_markdown(const MiningResult& result) {
  const auto grid = grid_of(result);
  std::string out = "| Source |";
  for (const auto& d : grid.datasets) out += " " + d + " |";
  out += " Avg. |\n|---|";
  for (std::size_t i = 0; i <= grid.datasets.size(); ++i) out += "---:|";
  out += "\n";
  for (const auto& source : grid.sources) {
    const auto [cells, avg] = row_of(result, grid, source);
    out += "| " + source + " |";
    for (const auto& c : cells) out += " " + (c.empty() ? std::string("n/a") : c) + " |";
    out += " " + avg + " |\n";
  }
  return out;
}

std::string render_proportions_csv(const MiningResult& result) {
  const auto grid = grid_of(result);
  std::string out = "source";
  for (const auto& d : grid.datasets) out += "," + data::csv_escape(d);
  out += ",avg\n";
  for (const auto& source : grid.sources) {
    const auto [cells, avg] = row_of(result, grid, source);
    out += data::csv_escape(source);
    for (const auto& c : cells) out += "," + c;
    out += "," + avg + "\n";
  }
  return out;
}

}  // namespace hallubench::metrics
