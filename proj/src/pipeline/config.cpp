#include "hallubench/pipeline/config.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "hallubench/util/error.hpp"

namespace hallubench::pipeline {

namespace {

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorCode::ConfigError, message); }

template <class T>
T get_or(const Json& object, const char* key, T fallback, std::string_view where) {
  if (!object.contains(key) || object.at(key).is_null()) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const Json::exception&) {
    config_error(std::string(where) + "." + key + " has the wrong type");
  }
}

std::string required_string(const Json& object, const char* key, std::string_view where) {
  auto value = get_or<std::string>(object, key, "", where);
  if (value.empty()) config_error(std::string(where) + "." + key + " is required");
  return value;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

llm::BackendConfig backend_from_json(const Json& j, std::uint64_t default_seed, const std::string& name) {
  const std::string where = "backends." + name;
  if (!j.is_object()) config_error(where + " must be an object");
  llm::BackendConfig b;
  try {
    b.kind = llm::parse_backend_kind(get_or<std::string>(j, "kind", "mock", where));
  } catch (const Error& e) {
    config_error(where + ": " + e.detail());
  }
  b.base_url = get_or<std::string>(j, "base_url", "", where);
  b.api_key_env = get_or<std::string>(j, "api_key_env", "", where);
  b.max_concurrency = get_or<int>(j, "max_concurrency", b.max_concurrency, where);
  b.retry_limit = get_or<int>(j, "retry_limit", b.retry_limit, where);
  b.backoff_base = std::chrono::milliseconds(get_or<int>(j, "backoff_ms", 500, where));
  b.timeout = std::chrono::milliseconds(get_or<int>(j, "timeout_ms", 120000, where));
  b.seed = get_or<std::uint64_t>(j, "seed", default_seed, where);
  if (j.contains("api_key")) config_error(where + ": API keys are read from the variable named by api_key_env only");
  b.validate();
  return b;
}

ModelEntry model_from_json(const Json& j, std::string_view where) {
  if (!j.is_object()) config_error(std::string(where) + " must be an object");
  ModelEntry m;
  m.name = required_string(j, "name", where);
  m.backend = required_string(j, "backend", where);
  m.params.model = get_or<std::string>(j, "model", m.name, where);
  m.params.temperature = get_or<double>(j, "temperature", m.params.temperature, where);
  m.params.max_tokens = get_or<int>(j, "max_tokens", m.params.max_tokens, where);
  m.top_k = get_or<int>(j, "top_k", m.top_k, where);
  if (m.params.temperature < 0.0 || m.params.temperature > 2.0) {
    config_error(std::string(where) + ".temperature must lie in [0, 2]");
  }
  if (m.params.max_tokens <= 0 || m.top_k <= 0) config_error(std::string(where) + ": limits must be positive");
  return m;
}

DatasetEntry dataset_from_json(const Json& j, const std::filesystem::path& base) {
  if (!j.is_object()) config_error("datasets entries must be objects");
  DatasetEntry d;
  const auto name = required_string(j, "name", "datasets[]");
  const std::string where = "datasets." + name;
  if (data::has_preset(name)) {
    d.spec = data::preset_spec(name);
    d.spec.name = name;
  } else {
    d.spec.name = name;
    d.spec.split_kind = data::SplitKind::Scaffold;
  }
  d.spec.smiles_column = get_or<std::string>(j, "smiles_column", d.spec.smiles_column, where);
  d.spec.label_column = get_or<std::string>(j, "label_column", d.spec.label_column, where);
  d.spec.positive_value = get_or<std::string>(j, "positive_value", d.spec.positive_value, where);
  if (j.contains("split")) d.spec.split_kind = data::parse_split_kind(get_or<std::string>(j, "split", "", where));
  if (d.spec.label_column.empty()) config_error(where + ".label_column is required for a custom dataset");
  d.path = resolve(base, required_string(j, "path", where));
  try {
    d.task = predict::parse_task(get_or<std::string>(j, "task", name, where));
  } catch (const Error&) {
    config_error(where + ": set \"task\" to one of HIV, BBBP, Clintox, SIDER, Tox21");
  }
  const auto molt5 = get_or<std::string>(j, "molt5", "", where);
  if (!molt5.empty()) d.molt5_path = resolve(base, molt5);
  return d;
}

bool valid_name(const std::string& name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == '.';
  });
}

}  // namespace

std::string Setting::slug() const {
  switch (kind) {
    case Kind::Smiles: return "smiles";
    case Kind::MolT5: return "molt5";
    case Kind::PubChem: return "pubchem";
    case Kind::Generated: return "llm_" + generator;
  }
  return {};
}

Setting parse_setting(std::string_view text) {
  const auto lower = to_lower(trim(text));
  if (lower == "smiles") return {Setting::Kind::Smiles, {}};
  if (lower == "molt5") return {Setting::Kind::MolT5, {}};
  if (lower == "pubchem") return {Setting::Kind::PubChem, {}};
  const auto t = trim(text);
  for (std::string_view prefix : {"llm:", "llm_"}) {
    if (t.size() > prefix.size() && to_lower(t.substr(0, prefix.size())) == prefix) {
      return {Setting::Kind::Generated, t.substr(prefix.size())};
    }
  }
  config_error("unknown setting '" + std::string(text) + "' (use smiles, molt5, pubchem or llm:<generator>)");
}

void RunConfig::validate() const {
  std::set<std::string> seen;
  for (const auto& d : datasets) {
    if (!valid_name(d.spec.name)) config_error("dataset name '" + d.spec.name + "' is not a plain identifier");
    if (!seen.insert(to_lower(d.spec.name)).second) config_error("dataset '" + d.spec.name + "' is listed twice");
  }
  auto check_models = [&](const std::vector<ModelEntry>& models, std::string_view role) {
    std::set<std::string> names;
    for (const auto& m : models) {
      if (!valid_name(m.name)) config_error(std::string(role) + " name '" + m.name + "' is not a plain identifier");
      if (!names.insert(m.name).second) config_error(std::string(role) + " '" + m.name + "' is listed twice");
      if (!backends.contains(m.backend)) {
        config_error(std::string(role) + " '" + m.name + "' uses undefined backend '" + m.backend + "'");
      }
    }
  };
  check_models(generators, "generator");
  check_models(predictors, "predictor");
  if (annotator) check_models({*annotator}, "annotator");
  for (const auto& s : settings) {
    if (s.kind == Setting::Kind::Generated) generator(s.generator);
  }
  if (evaluate_split != "test" && evaluate_split != "all") config_error("evaluate_split must be \"test\" or \"all\"");
  if (scorer.kind != "lexical" && scorer.kind != "http") config_error("scorer.kind must be \"lexical\" or \"http\"");
  if (scorer.kind == "http" && scorer.endpoint.empty()) config_error("scorer.endpoint is required for kind \"http\"");
  data::validate_fractions(fractions);
}

const DatasetEntry& RunConfig::dataset(std::string_view name) const {
  for (const auto& d : datasets) {
    if (to_lower(d.spec.name) == to_lower(name)) return d;
  }
  config_error("dataset '" + std::string(name) + "' is not configured");
}

const ModelEntry& RunConfig::generator(std::string_view name) const {
  for (const auto& m : generators) {
    if (m.name == name) return m;
  }
  config_error("generator '" + std::string(name) + "' is not configured");
}

const ModelEntry& RunConfig::predictor(std::string_view name) const {
  for (const auto& m : predictors) {
    if (m.name == name) return m;
  }
  config_error("predictor '" + std::string(name) + "' is not configured");
}

RunConfig config_from_json(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) config_error("configuration must be a JSON object");
  RunConfig c;
  c.seed = get_or<std::uint64_t>(doc, "seed", c.seed, "config");
  c.evaluate_split = get_or<std::string>(doc, "evaluate_split", c.evaluate_split, "config");
  c.output_dir = resolve(base_dir, get_or<std::string>(doc, "output_dir", "out", "config"));
  c.logprob_fallback = get_or<bool>(doc, "logprob_fallback", c.logprob_fallback, "config");
  if (doc.contains("split_fractions")) {
    const auto& f = doc.at("split_fractions");
    c.fractions = {get_or<double>(f, "train", 0.8, "split_fractions"), get_or<double>(f, "valid", 0.1, "split_fractions"),
                   get_or<double>(f, "test", 0.1, "split_fractions")};
  }
  if (doc.contains("pubchem")) {
    c.pubchem_base_url = get_or<std::string>(doc.at("pubchem"), "base_url", c.pubchem_base_url, "pubchem");
  }
  if (doc.contains("scorer")) {
    const auto& s = doc.at("scorer");
    c.scorer.kind = get_or<std::string>(s, "kind", c.scorer.kind, "scorer");
    c.scorer.endpoint = get_or<std::string>(s, "endpoint", "", "scorer");
    c.scorer.max_concurrency = get_or<int>(s, "max_concurrency", c.scorer.max_concurrency, "scorer");
  }
  for (const auto& d : doc.value("datasets", Json::array())) c.datasets.push_back(dataset_from_json(d, base_dir));
  if (doc.contains("backends")) {
    if (!doc.at("backends").is_object()) config_error("backends must map names to objects");
    for (const auto& [name, b] : doc.at("backends").items()) c.backends[name] = backend_from_json(b, c.seed, name);
  }
  for (const auto& g : doc.value("generators", Json::array())) c.generators.push_back(model_from_json(g, "generators"));
  for (const auto& p : doc.value("predictors", Json::array())) c.predictors.push_back(model_from_json(p, "predictors"));
  if (doc.contains("annotator")) c.annotator = model_from_json(doc.at("annotator"), "annotator");
  for (const auto& s : doc.value("settings", Json::array({"smiles", "molt5", "pubchem"}))) {
    if (!s.is_string()) config_error("settings entries must be strings");
    c.settings.push_back(parse_setting(s.get<std::string>()));
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    config_error("cannot read configuration " + path.string());
  }
  const auto doc = Json::parse(text, nullptr, false, true);
  if (doc.is_discarded()) config_error(path.string() + " is not valid JSON");
  return config_from_json(doc, path.parent_path());
}

}  // namespace hallubench::pipeline
