#include "hallubench/describe/description.hpp"

#include <spdlog/spdlog.h>

#include "hallubench/data/csv.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::describe {

std::string_view to_string(DescriptionSource source) noexcept {
  switch (source) {
    case DescriptionSource::None: return "none";
    case DescriptionSource::MolT5: return "molt5";
    case DescriptionSource::PubChem: return "pubchem";
    case DescriptionSource::LLM: return "llm";
  }
  return "none";
}

DescriptionSource parse_source(std::string_view text) {
  const auto lower = to_lower(text);
  if (lower == "none" || lower == "smiles") return DescriptionSource::None;
  if (lower == "molt5") return DescriptionSource::MolT5;
  if (lower == "pubchem") return DescriptionSource::PubChem;
  if (lower == "llm") return DescriptionSource::LLM;
  throw Error(ErrorCode::InvalidArgument, "unknown description source '" + std::string(text) + "'");
}

Json to_json(const DescriptionRecord& r) {
  Json j{{"smiles", r.smiles}, {"source", to_string(r.source)}, {"text", r.text}, {"created_at", r.created_at}};
  j["model"] = r.model ? Json(*r.model) : Json(nullptr);
  j["temperature"] = r.temperature ? Json(*r.temperature) : Json(nullptr);
  return j;
}

DescriptionRecord description_from_json(const Json& j) {
  for (const char* key : {"smiles", "source", "text"}) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw Error(ErrorCode::MissingField, std::string("description record lacks '") + key + "'");
    }
  }
  DescriptionRecord r;
  r.smiles = j["smiles"].get<std::string>();
  r.source = parse_source(j["source"].get<std::string>());
  r.text = j["text"].get<std::string>();
  if (j.contains("created_at") && j["created_at"].is_string()) r.created_at = j["created_at"].get<std::string>();
  if (j.contains("model") && j["model"].is_string()) r.model = j["model"].get<std::string>();
  if (j.contains("temperature") && j["temperature"].is_number()) r.temperature = j["temperature"].get<double>();
  if ((r.source == DescriptionSource::None) != r.text.empty()) {
    throw Error(ErrorCode::InvalidArgument, "description text must be empty exactly for source none");
  }
  if (r.source == DescriptionSource::LLM && !r.model) {
    throw Error(ErrorCode::InvalidArgument, "LLM description without a model");
  }
  return r;
}

llm::ChatPrompt build_description_prompt(std::string_view smiles) {
  if (trim(smiles).empty()) throw Error(ErrorCode::EmptyInput, "empty SMILES");
  return {std::string(kExpertSystemPrompt), std::string(smiles) + " Describe the molecule in natural language:"};
}

DescriptionRecord no_description(std::string smiles, const Clock& clock) {
  return {std::move(smiles), DescriptionSource::None, std::nullopt, std::nullopt, "", clock()};
}

DescriptionRecord generate_description(llm::Gateway& gateway, const std::string& smiles,
                                       const llm::GenerationParams& params, const Clock& clock) {
  auto text = trim(gateway.chat_complete(build_description_prompt(smiles), params));
  if (text.empty()) throw Error(ErrorCode::MalformedResponse, "empty description for " + smiles);
  return {smiles, DescriptionSource::LLM, params.model, params.temperature, std::move(text), clock()};
}

ExternalDescriptions load_external_descriptions(const std::filesystem::path& path, DescriptionSource source,
                                                const Clock& clock) {
  std::vector<std::pair<std::string, std::string>> rows;
  const auto ext = to_lower(path.extension().string());
  if (ext == ".jsonl" || ext == ".json") {
    const auto loaded = read_jsonl(path);
    for (const auto& row : loaded.rows) {
      if (!row.is_object() || !row.contains("smiles") || !row["smiles"].is_string() || !row.contains("text")) {
        throw Error(ErrorCode::MissingColumn, path.string() + ": rows need 'smiles' and 'text'");
      }
      rows.emplace_back(row["smiles"].get<std::string>(), row["text"].is_string() ? row["text"].get<std::string>() : "");
    }
  } else {
    const auto table = data::read_csv(path);
    const auto smiles_col = table.column("smiles");
    const auto text_col = table.column("text");
    if (!smiles_col || !text_col) throw Error(ErrorCode::MissingColumn, path.string() + ": needs smiles and text columns");
    for (const auto& row : table.rows) rows.emplace_back(row[*smiles_col], row[*text_col]);
  }

  ExternalDescriptions out;
  const std::string timestamp = clock();
  for (auto& [smiles, text] : rows) {
    auto cleaned = trim(text);
    if (cleaned.empty()) {
      ++out.skipped_empty;
      continue;
    }
    out.records.push_back({trim(smiles), source, std::nullopt, std::nullopt, std::move(cleaned), timestamp});
  }
  if (out.skipped_empty > 0) {
    spdlog::warn("{}: skipped {} rows with empty description text", path.string(), out.skipped_empty);
  }
  return out;
}

}  // namespace hallubench::describe
