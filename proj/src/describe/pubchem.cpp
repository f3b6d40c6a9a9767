#include "hallubench/describe/pubchem.hpp"

#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "hallubench/chem/properties.hpp"
#include "hallubench/chem/smiles.hpp"
#include "hallubench/util/error.hpp"
#include "hallubench/util/hashing.hpp"

namespace hallubench::describe {
namespace {

Json parse_body(const std::string& body, const std::string& url) {
  try {
    return Json::parse(body);
  } catch (const Json::parse_error&) {
    throw Error(ErrorCode::MalformedResponse, "PubChem returned non-JSON for " + url);
  }
}

double number_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::MalformedResponse, std::string("PubChem record lacks ") + key);
  const auto& v = j[key];
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return std::stod(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::MalformedResponse, std::string("PubChem field ") + key + " is not numeric");
}

// PubChem appends net charge to formulas ("C5H14NO+"); the local formula does not.
std::string strip_charge(const std::string& formula) { return formula.substr(0, formula.find_first_of("+-")); }

}  // namespace

std::string percent_encode(std::string_view text) {
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out += fmt::format("%{:02X}", c);
    }
  }
  return out;
}

PubChemClient::PubChemClient(std::shared_ptr<net::HttpTransport> transport, std::string base_url,
                             std::shared_ptr<llm::ResponseCache> cache, net::RetryPolicy policy, Sleeper sleeper)
    : transport_(std::move(transport)),
      base_url_(std::move(base_url)),
      cache_(std::move(cache)),
      policy_(policy),
      sleeper_(std::move(sleeper)) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::pair<int, std::string> PubChemClient::get(const std::string& url) {
  const auto key = sha256_hex("pubchem\n" + url);
  if (cache_) {
    if (auto hit = cache_->lookup(key)) return {hit->at("status").get<int>(), hit->at("body").get<std::string>()};
  }
  net::HttpRequest request;
  request.url = url;
  request.timeout = std::chrono::seconds(30);
  const auto response = net::send_with_retry(*transport_, request, policy_, sleeper_);
  if (response.status != 200 && response.status != 404) {
    throw Error(ErrorCode::NetworkError, "PubChem HTTP " + std::to_string(response.status) + " for " + url);
  }
  if (cache_) cache_->store(key, Json{{"url", url}}, Json{{"status", response.status}, {"body", response.body}});
  return {response.status, response.body};
}

std::optional<PubChemMetadata> PubChemClient::fetch(const std::string& smiles) {
  const auto url = base_url_ + "/compound/smiles/" + percent_encode(smiles) +
                   "/property/MolecularFormula,MolecularWeight,HeavyAtomCount,Title/JSON";
  const auto [status, body] = get(url);
  if (status == 404) return std::nullopt;
  const auto json = parse_body(body, url);
  const Json* record = nullptr;
  if (json.contains("PropertyTable") && json["PropertyTable"].contains("Properties") &&
      json["PropertyTable"]["Properties"].is_array() && !json["PropertyTable"]["Properties"].empty()) {
    record = &json["PropertyTable"]["Properties"][0];
  }
  if (record == nullptr || !record->is_object()) throw Error(ErrorCode::MalformedResponse, "no PropertyTable in " + url);
  const auto cid = static_cast<long long>(record->value("CID", 0.0));
  if (cid <= 0) return std::nullopt;

  PubChemMetadata meta;
  meta.cid = cid;
  if (!record->contains("MolecularFormula") || !(*record)["MolecularFormula"].is_string()) {
    throw Error(ErrorCode::MalformedResponse, "PubChem record lacks MolecularFormula");
  }
  meta.formula = (*record)["MolecularFormula"].get<std::string>();
  meta.weight = number_field(*record, "MolecularWeight");
  meta.heavy_atom_count = static_cast<int>(number_field(*record, "HeavyAtomCount"));
  meta.name = record->contains("Title") && (*record)["Title"].is_string() ? (*record)["Title"].get<std::string>()
                                                                            : "CID " + std::to_string(cid);

  const auto syn_url = base_url_ + "/compound/cid/" + std::to_string(cid) + "/synonyms/JSON";
  const auto [syn_status, syn_body] = get(syn_url);
  if (syn_status == 200) {
    const auto syn = parse_body(syn_body, syn_url);
    std::set<std::string> seen{to_lower(meta.name)};
    try {
      for (const auto& s : syn.at("InformationList").at("Information").at(0).at("Synonym")) {
        if (!s.is_string()) continue;
        auto value = trim(s.get<std::string>());
        if (!value.empty() && seen.insert(to_lower(value)).second) meta.synonyms.push_back(std::move(value));
      }
    } catch (const Json::exception&) {
      throw Error(ErrorCode::MalformedResponse, "unexpected synonyms payload from " + syn_url);
    }
  }
  return meta;
}

std::string pubchem_description(const PubChemMetadata& meta) {
  std::string text = fmt::format(
      "This compound, known as {}, has the molecular formula {}, a molecular weight of {} g/mol, and {} heavy atoms.",
      meta.name, meta.formula, format_fixed(meta.weight, 2), meta.heavy_atom_count);
  if (!meta.synonyms.empty()) {
    std::string names;
    for (std::size_t i = 0; i < meta.synonyms.size() && i < 3; ++i) {
      if (i > 0) names += ", ";
      names += meta.synonyms[i];
    }
    text += " It is also known as " + names + ".";
  }
  return text;
}

bool formula_matches(const std::string& smiles, const PubChemMetadata& meta) {
  std::string local;
  try {
    local = chem::molecular_formula(chem::parse_smiles(smiles));
  } catch (const Error& e) {
    spdlog::warn("formula check skipped for '{}': {}", smiles, e.detail());
    return false;
  }
  if (local == strip_charge(meta.formula)) return true;
  spdlog::warn("formula mismatch for '{}': computed {}, PubChem {}", smiles, local, meta.formula);
  return false;
}

}  // namespace hallubench::describe
