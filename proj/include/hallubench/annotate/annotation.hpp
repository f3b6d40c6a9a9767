#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hallubench/llm/gateway.hpp"
#include "hallubench/util/io.hpp"

namespace hallubench::annotate {

enum class HallucinationType {
  FunctionalHallucination,
  StructuralMisdescription,
  AnalogicalHallucination,
  GenericFluff,
  NoHallucination,
};

inline constexpr std::array<HallucinationType, 5> kAllTypes = {
    HallucinationType::FunctionalHallucination, HallucinationType::StructuralMisdescription,
    HallucinationType::AnalogicalHallucination, HallucinationType::GenericFluff, HallucinationType::NoHallucination};

// "Structural misdescription" etc.
std::string_view display_name(HallucinationType type) noexcept;
std::string_view definition(HallucinationType type) noexcept;

// Case-insensitive; spaces, underscores and hyphens are ignored, so
// "structural_misdescription" and "StructuralMisdescription" both match.
// Throws UnknownCategory.
HallucinationType parse_type(std::string_view name);

struct AnnotationRecord {
  std::string smiles;
  std::string description;
  std::vector<HallucinationType> types;  // decreasing importance
  std::string explanation;

  bool operator==(const AnnotationRecord&) const = default;
};

// Drops repeated types (first occurrence wins) and rejects an empty list or
// "No hallucination" alongside another type.
std::vector<HallucinationType> normalize_types(const std::vector<HallucinationType>& types);

Json to_json(const AnnotationRecord& record);
AnnotationRecord annotation_from_json(const Json& json);

extern const char* const kAnnotatorSystemPrompt;

// The category list as "Name: Definition" lines.
std::string category_block();

// Throws EmptyInput for a blank SMILES or description.
llm::ChatPrompt build_annotation_prompt(std::string_view smiles, std::string_view description);

// First balanced JSON object in `text` that parses, skipping prose and code
// fences. Throws NoJsonFound.
Json extract_json_object(std::string_view text);

// Reads {smiles, categories, explanation} from a model reply. The category
// key may also be "category" or "category_names" and may hold a string or a
// list. With `strict`, the reply must be a bare JSON object.
// Errors: NoJsonFound, MissingField, UnknownCategory, MixedNoHallucination.
AnnotationRecord parse_annotation_response(std::string_view text, bool strict = false);

// Share of records per primary (first-listed) type. Throws EmptyInput.
std::map<HallucinationType, double> type_distribution(const std::vector<AnnotationRecord>& records);

struct AnnotationInput {
  std::string smiles;
  std::string description;
};

struct FailedAnnotation {
  std::size_t index = 0;
  std::string smiles;
  std::string reason;
};

struct AnnotationBatch {
  std::vector<AnnotationRecord> records;  // input order, failures omitted
  std::vector<FailedAnnotation> failed;
};

// Annotates concurrently. Auth and configuration errors abort; any other
// failure skips that input and is reported in `failed`. The description in
// each record is the input text, not the model's echo.
AnnotationBatch annotate_batch(llm::Gateway& gateway, const std::vector<AnnotationInput>& inputs,
                               const llm::GenerationParams& params, bool strict = false);

}  // namespace hallubench::annotate
