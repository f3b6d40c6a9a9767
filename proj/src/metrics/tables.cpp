#include "hallubench/metrics/tables.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "hallubench/data/csv.hpp"
#include "hallubench/util/error.hpp"
#include "hallubench/util/io.hpp"

namespace hallubench::metrics {

namespace {

constexpr std::array<std::string_view, 5> kBenchmarkOrder = {"hiv", "bbbp", "clintox", "sider", "tox21"};

bool same_name(std::string_view a, std::string_view b) { return to_lower(a) == to_lower(b); }

std::string fixed2(double v) { return format_fixed(v, 2); }

}  // namespace

RunResult make_run_result(std::string model, std::string setting, std::map<std::string, double> per_dataset_auc) {
  RunResult r{std::move(model), std::move(setting), std::move(per_dataset_auc), 0.0};
  if (!r.per_dataset_auc.empty()) {
    double sum = 0.0;
    for (const auto& [name, auc] : r.per_dataset_auc) sum += auc;
    r.avg = sum / static_cast<double>(r.per_dataset_auc.size());
  }
  return r;
}

std::vector<DeltaRow> delta_table(const std::vector<RunResult>& results, const BaselineNames& baselines) {
  std::vector<std::string> models;
  for (const auto& r : results) {
    if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
  }

  std::vector<DeltaRow> rows;
  for (const auto& model : models) {
    auto baseline_avg = [&](const std::string& setting) {
      for (const auto& r : results) {
        if (r.model == model && same_name(r.setting, setting)) return r.avg;
      }
      throw Error(ErrorCode::MissingBaseline, "no " + setting + " baseline for " + model);
    };
    const double smiles = baseline_avg(baselines.smiles);
    const double molt5 = baseline_avg(baselines.molt5);
    const double pubchem = baseline_avg(baselines.pubchem);
    for (const auto& r : results) {
      if (r.model != model) continue;
      DeltaRow row{r.model, r.setting, r.per_dataset_auc, r.avg, {}, {}, {}};
      if (!same_name(r.setting, baselines.smiles)) row.delta_smiles = r.avg - smiles;
      if (!same_name(r.setting, baselines.molt5)) row.delta_molt5 = r.avg - molt5;
      if (!same_name(r.setting, baselines.pubchem)) row.delta_pubchem = r.avg - pubchem;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<std::string> order_datasets(std::vector<std::string> columns) {
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  auto rank = [](const std::string& name) {
    const auto it = std::find(kBenchmarkOrder.begin(), kBenchmarkOrder.end(), to_lower(name));
    return static_cast<std::size_t>(it - kBenchmarkOrder.begin());
  };
  std::stable_sort(columns.begin(), columns.end(),
                   [&](const std::string& a, const std::string& b) { return rank(a) < rank(b); });
  return columns;
}

std::vector<std::string> dataset_columns(const std::vector<DeltaRow>& rows) {
  std::vector<std::string> names;
  for (const auto& row : rows) {
    for (const auto& [name, auc] : row.per_dataset_auc) names.push_back(name);
  }
  return order_datasets(std::move(names));
}

std::string format_delta(const std::optional<double>& delta) {
  if (!delta) return "-";
  // Anything that rounds to zero prints as +0.00.
  const std::string digits = fixed2(*delta);
  if (digits == "-0.00" || digits == "0.00") return "+0.00";
  return *delta > 0 ? "+" + digits : digits;
}

std::string render_markdown(const std::vector<DeltaRow>& rows) {
  const auto columns = dataset_columns(rows);
  std::string out;
  std::string current;
  for (const auto& row : rows) {
    if (out.empty() || row.model != current) {
      current = row.model;
      if (!out.empty()) out += "\n";
      out += "### " + row.model + "\n\n| Setting |";
      for (const auto& c : columns) out += " " + c + " |";
      out += " Avg | ΔSMILES | ΔMolT5 | ΔPubChem |\n|---|";
      for (std::size_t i = 0; i < columns.size() + 4; ++i) out += "---:|";
      out += "\n";
    }
    out += "| " + row.setting + " |";
    for (const auto& c : columns) {
      const auto it = row.per_dataset_auc.find(c);
      out += " " + (it == row.per_dataset_auc.end() ? std::string("n/a") : fixed2(it->second)) + " |";
    }
    out += fmt::format(" {} | {} | {} | {} |\n", fixed2(row.avg), format_delta(row.delta_smiles),
                       format_delta(row.delta_molt5), format_delta(row.delta_pubchem));
  }
  return out;
}

std::string render_csv(const std::vector<DeltaRow>& rows) {
  const auto columns = dataset_columns(rows);
  std::string out = "model,setting";
  for (const auto& c : columns) out += "," + data::csv_escape(c);
  out += ",avg,delta_smiles,delta_molt5,delta_pubchem\n";
  auto cell = [](const std::optional<double>& v) { return v ? fixed2(*v) : std::string(); };
  for (const auto& row : rows) {
    out += data::csv_escape(row.model) + "," + data::csv_escape(row.setting);
    for (const auto& c : columns) {
      const auto it = row.per_dataset_auc.find(c);
      out += "," + (it == row.per_dataset_auc.end() ? std::string() : fixed2(it->second));
    }
    out += "," + fixed2(row.avg) + "," + cell(row.delta_smiles) + "," + cell(row.delta_molt5) + "," +
           cell(row.delta_pubchem) + "\n";
  }
  return out;
}

}  // namespace hallubench::metrics
