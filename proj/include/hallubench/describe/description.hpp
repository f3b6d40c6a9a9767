#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hallubench/llm/gateway.hpp"
#include "hallubench/util/io.hpp"

namespace hallubench::describe {

enum class DescriptionSource { None, MolT5, PubChem, LLM };

std::string_view to_string(DescriptionSource source) noexcept;
DescriptionSource parse_source(std::string_view text);

struct DescriptionRecord {
  std::string smiles;
  DescriptionSource source = DescriptionSource::None;
  std::optional<std::string> model;
  std::optional<double> temperature;
  std::string text;  // empty exactly when source is None
  std::string created_at;

  bool operator==(const DescriptionRecord&) const = default;
};

Json to_json(const DescriptionRecord& record);
// Throws MissingField for absent keys and InvalidArgument when the record
// breaks the source/text rules.
DescriptionRecord description_from_json(const Json& json);

inline constexpr std::string_view kExpertSystemPrompt = "You are an expert in drug discovery.";

// Throws EmptyInput for blank SMILES.
llm::ChatPrompt build_description_prompt(std::string_view smiles);

DescriptionRecord no_description(std::string smiles, const Clock& clock);

DescriptionRecord generate_description(llm::Gateway& gateway, const std::string& smiles,
                                       const llm::GenerationParams& params, const Clock& clock);

struct ExternalDescriptions {
  std::vector<DescriptionRecord> records;
  std::size_t skipped_empty = 0;
};

// Reads {smiles, text} rows from JSONL (".jsonl"/".json") or CSV (anything
// else). Rows with blank text are skipped and counted.
ExternalDescriptions load_external_descriptions(const std::filesystem::path& path, DescriptionSource source,
                                                const Clock& clock);

}  // namespace hallubench::describe
