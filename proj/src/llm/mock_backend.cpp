#include <algorithm>
#include <array>
#include <cmath>

#include "hallubench/llm/backend.hpp"
#include "hallubench/util/error.hpp"
#include "hallubench/util/hashing.hpp"

namespace hallubench::llm {
namespace {

constexpr std::array kOpeners = {"The molecule is", "This compound is", "This structure represents",
                                 "The given SMILES describes"};
constexpr std::array kKinds = {"an aromatic heterocycle",  "a small organic acid",  "a substituted benzene derivative",
                               "a lipophilic amine",       "a polycyclic scaffold", "a flexible aliphatic chain",
                               "a sulfonamide derivative", "an ester prodrug"};
constexpr std::array kFeatures = {"bearing a hydroxyl group",         "with a carbonyl-containing side chain",
                                  "featuring a fused ring system",    "containing a basic nitrogen atom",
                                  "with halogen substituents",        "carrying two chiral centers",
                                  "with a para-substituted phenyl ring"};
constexpr std::array kClaims = {
    "It is used as an intermediate in pharmaceutical synthesis.",
    "It acts as an inhibitor of bacterial cell wall enzymes.",
    "Like a key in a lock, it fits tightly into receptor pockets.",
    "It has interesting and versatile chemical properties.",
    "It is a natural product isolated from plant roots.",
    "It crosses cell membranes readily because of its balanced polarity.",
    "It is structurally related to common anti-inflammatory drugs."};
constexpr std::array kCategories = {"Functional hallucination", "Structural misdescription",
                                    "Analogical hallucination", "Generic fluff", "No hallucination"};

template <class Array>
const char* pick(const Array& options, std::uint64_t h) {
  return options[h % options.size()];
}

std::string first_token(std::string_view text) {
  const auto start = text.find_first_not_of(" \t\n");
  if (start == std::string_view::npos) return {};
  const auto end = text.find_first_of(" \t\n", start);
  return std::string(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
}

std::string line_after(std::string_view text, std::string_view label) {
  const auto pos = text.find(label);
  if (pos == std::string_view::npos) return {};
  const auto start = pos + label.size();
  const auto end = text.find('\n', start);
  return std::string(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
}

bool is_yes_no_question(const ChatPrompt& prompt) {
  return prompt.user.find("Only answer Yes or No") != std::string::npos;
}

bool is_annotation_request(const ChatPrompt& prompt) {
  return prompt.system.find("hallucinations in molecular descriptions") != std::string::npos;
}

// Probability of "Yes" and total mass on the Yes/No variants.
std::pair<double, double> yes_no_split(std::uint64_t h) {
  const double p_yes = 0.02 + 0.96 * unit_interval(splitmix64(h));
  const double mass = 0.80 + 0.15 * unit_interval(splitmix64(h + 1));
  return {p_yes, mass};
}

}  // namespace

MockBackend::MockBackend(std::uint64_t seed, int max_concurrency)
    : seed_(seed), max_concurrency_(std::max(1, max_concurrency)) {}

std::string MockBackend::identity() const { return "mock:" + std::to_string(seed_); }

std::uint64_t MockBackend::hash(const ChatPrompt& prompt, const GenerationParams& params,
                                std::string_view op) const {
  std::string material = std::to_string(seed_);
  for (std::string_view part : {std::string_view(params.model), std::string_view(format_fixed(params.temperature, 4)),
                                std::string_view(prompt.system), std::string_view(prompt.user), op}) {
    material.push_back('\x1f');
    material.append(part);
  }
  return fnv1a64(material);
}

std::string MockBackend::chat_complete(const ChatPrompt& prompt, const GenerationParams& params) {
  if (is_yes_no_question(prompt)) {
    const auto [p_yes, mass] = yes_no_split(hash(prompt, params, "decide"));
    return p_yes >= 0.5 ? "Yes" : "No";
  }
  const std::uint64_t h = hash(prompt, params, "text");
  if (is_annotation_request(prompt)) {
    const auto smiles = line_after(prompt.user, "Molecule: ");
    Json verdict{{"smiles", smiles}};
    const std::size_t first = splitmix64(h) % kCategories.size();
    Json categories = Json::array({kCategories[first]});
    if (first != kCategories.size() - 1 && splitmix64(h + 1) % 3 == 0) {
      const std::size_t second = splitmix64(h + 2) % (kCategories.size() - 1);
      if (second != first) categories.push_back(kCategories[second]);
    }
    verdict["categories"] = categories;
    verdict["explanation"] = std::string("The description ") +
                             (first == kCategories.size() - 1 ? "matches the structure."
                                                              : "contains claims not supported by the structure.");
    return "```json\n" + verdict.dump(2) + "\n```";
  }
  const auto smiles = first_token(prompt.user);
  std::string text = std::string(pick(kOpeners, splitmix64(h))) + " " + pick(kKinds, splitmix64(h + 1)) + " " +
                     pick(kFeatures, splitmix64(h + 2)) + ". " + pick(kClaims, splitmix64(h + 3));
  if (params.temperature >= 0.3) text += std::string(" ") + pick(kClaims, splitmix64(h + 4));
  if (!smiles.empty() && splitmix64(h + 5) % 2 == 0) text = "The SMILES " + smiles + " encodes a molecule. " + text;
  const auto limit = static_cast<std::size_t>(std::max(1, params.max_tokens)) * 4;
  if (text.size() > limit) text.resize(limit);
  return text;
}

std::vector<TokenLogProb> MockBackend::first_token_logprobs(const ChatPrompt& prompt, const GenerationParams& params,
                                                            int top_k) {
  if (top_k <= 0) throw Error(ErrorCode::InvalidArgument, "top_k must be positive");
  const std::uint64_t h = hash(prompt, params, "decide");
  const auto [p_yes, mass] = yes_no_split(h);
  const double yes_share = 0.6 + 0.3 * unit_interval(splitmix64(h + 2));
  const double no_share = 0.6 + 0.3 * unit_interval(splitmix64(h + 3));
  const double yes = mass * p_yes;
  const double no = mass * (1.0 - p_yes);
  std::vector<TokenLogProb> out = {{"Yes", std::log(yes * yes_share)},
                                   {" Yes", std::log(yes * (1.0 - yes_share))},
                                   {"No", std::log(no * no_share)},
                                   {" no", std::log(no * (1.0 - no_share))},
                                   {"Maybe", std::log((1.0 - mass) * 0.5)}};
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.logprob > b.logprob; });
  if (out.size() > static_cast<std::size_t>(top_k)) out.resize(static_cast<std::size_t>(top_k));
  return out;
}

}  // namespace hallubench::llm
