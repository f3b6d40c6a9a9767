#include "hallubench/annotate/annotation.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "hallubench/util/concurrency.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::annotate {

namespace {

std::string squash(std::string_view name) {
  std::string out;
  for (unsigned char c : name) {
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
  }
  return out;
}

// Index one past the closing brace of the object opening at `start`, or npos.
std::size_t balanced_end(std::string_view text, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

const Json* find_key(const Json& object, std::initializer_list<std::string_view> names) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    const auto key = squash(it.key());
    for (auto name : names) {
      if (key == name) return &it.value();
    }
  }
  return nullptr;
}

}  // namespace

std::string_view display_name(HallucinationType type) noexcept {
  switch (type) {
    case HallucinationType::FunctionalHallucination: return "Functional hallucination";
    case HallucinationType::StructuralMisdescription: return "Structural misdescription";
    case HallucinationType::AnalogicalHallucination: return "Analogical hallucination";
    case HallucinationType::GenericFluff: return "Generic fluff";
    case HallucinationType::NoHallucination: return "No hallucination";
  }
  return "";
}

std::string_view definition(HallucinationType type) noexcept {
  switch (type) {
    case HallucinationType::FunctionalHallucination:
      return "Adds plausible usage/application info or unverified biochemical action";
    case HallucinationType::StructuralMisdescription: return "Incorrect description of atoms, bonds, or substructures";
    case HallucinationType::AnalogicalHallucination: return "Uses metaphor or analogy to describe structure or function";
    case HallucinationType::GenericFluff: return "Vague, uninformative, or subjective phrases";
    case HallucinationType::NoHallucination: return "Accurate statements without speculative or incorrect elements";
  }
  return "";
}

HallucinationType parse_type(std::string_view name) {
  const auto key = squash(name);
  for (auto type : kAllTypes) {
    if (squash(display_name(type)) == key) return type;
  }
  throw Error(ErrorCode::UnknownCategory, "unknown hallucination category '" + std::string(name) + "'");
}

std::vector<HallucinationType> normalize_types(const std::vector<HallucinationType>& types) {
  std::vector<HallucinationType> out;
  for (auto t : types) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  if (out.empty()) throw Error(ErrorCode::MissingField, "annotation lists no categories");
  if (out.size() > 1 && std::find(out.begin(), out.end(), HallucinationType::NoHallucination) != out.end()) {
    throw Error(ErrorCode::MixedNoHallucination, "\"No hallucination\" listed together with other categories");
  }
  return out;
}

Json to_json(const AnnotationRecord& r) {
  Json types = Json::array();
  for (auto t : r.types) types.push_back(std::string(display_name(t)));
  return Json{{"smiles", r.smiles}, {"description", r.description}, {"types", types}, {"explanation", r.explanation}};
}

AnnotationRecord annotation_from_json(const Json& j) {
  AnnotationRecord r;
  std::vector<HallucinationType> types;
  try {
    r.smiles = j.at("smiles").get<std::string>();
    r.description = j.value("description", std::string());
    r.explanation = j.at("explanation").get<std::string>();
    for (const auto& t : j.at("types")) types.push_back(parse_type(t.get<std::string>()));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MissingField, std::string("annotation record: ") + e.what());
  }
  r.types = normalize_types(types);
  return r;
}

const char* const kAnnotatorSystemPrompt =
    "You are an expert annotator specializing in identifying hallucinations in molecular descriptions. Your task is "
    "to carefully analyze descriptions and categorize any hallucinations according to the provided taxonomy.";

std::string category_block() {
  std::string out;
  for (auto type : kAllTypes) {
    if (!out.empty()) out += "\n";
    out += fmt::format("{}: {}", display_name(type), definition(type));
  }
  return out;
}

llm::ChatPrompt build_annotation_prompt(std::string_view smiles, std::string_view description) {
  if (trim(smiles).empty()) throw Error(ErrorCode::EmptyInput, "annotation prompt needs a SMILES string");
  if (trim(description).empty()) throw Error(ErrorCode::EmptyInput, "annotation prompt needs a description");
  std::string user = fmt::format(
      "{0} Your task is to identify all the types of hallucinations present in the hallucinated description of the "
      "molecule.\n\n"
      "Molecule: {0}\n"
      "Hallucination: \"{1}\"\n\n"
      "Here is a description of each category:\n\n"
      "{2}\n\n"
      "Instructions:\n"
      "1. Choose the category names that BEST matches the hallucination. Write these category names in decreasing "
      "order of importance.\n"
      "2. Provide an explanation for why you chose this/these category name(s) and their order of importance.\n"
      "3. Return json with molecule SMILES, category name(s) and explanation\n"
      "4. If no category name matches, use \"No hallucination\"",
      smiles, description, category_block());
  return {kAnnotatorSystemPrompt, std::move(user)};
}

Json extract_json_object(std::string_view text) {
  for (auto start = text.find('{'); start != std::string_view::npos; start = text.find('{', start + 1)) {
    const auto end = balanced_end(text, start);
    if (end == std::string_view::npos) break;
    const auto parsed = Json::parse(text.substr(start, end - start), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
  }
  throw Error(ErrorCode::NoJsonFound, "no JSON object in annotator reply");
}

AnnotationRecord parse_annotation_response(std::string_view text, bool strict) {
  Json object;
  if (strict) {
    object = Json::parse(trim(text), nullptr, false);
    if (object.is_discarded() || !object.is_object()) {
      throw Error(ErrorCode::NoJsonFound, "annotator reply is not a bare JSON object");
    }
  } else {
    object = extract_json_object(text);
  }

  AnnotationRecord r;
  const Json* smiles = find_key(object, {"smiles", "moleculesmiles", "molecule"});
  const Json* categories = find_key(object, {"categories", "category", "categorynames", "categoryname"});
  const Json* explanation = find_key(object, {"explanation"});
  if (smiles == nullptr || !smiles->is_string()) throw Error(ErrorCode::MissingField, "annotation lacks smiles");
  if (categories == nullptr) throw Error(ErrorCode::MissingField, "annotation lacks categories");
  if (explanation == nullptr || !explanation->is_string()) {
    throw Error(ErrorCode::MissingField, "annotation lacks an explanation");
  }
  r.smiles = smiles->get<std::string>();
  r.explanation = explanation->get<std::string>();

  std::vector<HallucinationType> types;
  if (categories->is_string()) {
    types.push_back(parse_type(categories->get<std::string>()));
  } else if (categories->is_array()) {
    for (const auto& c : *categories) {
      if (!c.is_string()) throw Error(ErrorCode::UnknownCategory, "category entry is not a string: " + c.dump());
      types.push_back(parse_type(c.get<std::string>()));
    }
  } else {
    throw Error(ErrorCode::MissingField, "categories must be a string or a list");
  }
  r.types = normalize_types(types);
  return r;
}

std::map<HallucinationType, double> type_distribution(const std::vector<AnnotationRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no annotations to aggregate");
  std::map<HallucinationType, std::size_t> counts;
  for (const auto& r : records) {
    if (r.types.empty()) throw Error(ErrorCode::MissingField, "annotation for " + r.smiles + " has no types");
    ++counts[r.types.front()];
  }
  std::map<HallucinationType, double> out;
  for (const auto& [type, count] : counts) {
    out[type] = static_cast<double>(count) / static_cast<double>(records.size());
  }
  return out;
}

AnnotationBatch annotate_batch(llm::Gateway& gateway, const std::vector<AnnotationInput>& inputs,
                               const llm::GenerationParams& params, bool strict) {
  std::vector<std::optional<AnnotationRecord>> results(inputs.size());
  std::vector<std::string> errors(inputs.size());
  parallel_for_index(inputs.size(), static_cast<std::size_t>(gateway.backend().max_concurrency()),
                     [&](std::size_t i) {
                       try {
                         const auto prompt = build_annotation_prompt(inputs[i].smiles, inputs[i].description);
                         auto record = parse_annotation_response(gateway.chat_complete(prompt, params), strict);
                         record.smiles = inputs[i].smiles;
                         record.description = inputs[i].description;
                         results[i] = std::move(record);
                       } catch (const Error& e) {
                         if (e.code() == ErrorCode::AuthError || category(e.code()) == ErrorCategory::Config) throw;
                         errors[i] = e.what();
                       }
                     });
  AnnotationBatch batch;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (results[i]) {
      batch.records.push_back(std::move(*results[i]));
    } else {
      spdlog::warn("annotation skipped for {}: {}", inputs[i].smiles, errors[i]);
      batch.failed.push_back({i, inputs[i].smiles, errors[i]});
    }
  }
  return batch;
}

}  // namespace hallubench::annotate
