#include <doctest.h>

#include <numeric>
#include <random>

#include "hallubench/annotate/annotation.hpp"
#include "hallubench/describe/description.hpp"
#include "hallubench/predict/task.hpp"
#include "hallubench/util/error.hpp"

using namespace hallubench;
using namespace hallubench::annotate;
using HT = HallucinationType;

namespace {

const std::string kGolden = std::string(HB_FIXTURE_DIR) + "/golden/";

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

void check_golden(const llm::ChatPrompt& prompt, const std::string& name) {
  CAPTURE(name);
  CHECK(prompt.system == read_file(kGolden + name + ".system.txt"));
  CHECK(prompt.user == read_file(kGolden + name + ".user.txt"));
}

// Answers every annotation request; every tenth reply is not JSON at all.
class FlakyAnnotator : public llm::Backend {
 public:
  llm::BackendKind kind() const noexcept override { return llm::BackendKind::Mock; }
  std::string identity() const override { return "flaky"; }
  int max_concurrency() const noexcept override { return 4; }
  std::string chat_complete(const llm::ChatPrompt& prompt, const llm::GenerationParams&) override {
    const auto pos = prompt.user.find("Molecule: ") + 10;
    const auto smiles = prompt.user.substr(pos, prompt.user.find('\n', pos) - pos);
    if (smiles.size() % 10 == 0) return "I am not able to help with that.";
    return "Here you go: {\"smiles\": \"" + smiles +
           "\", \"category\": \"Structural misdescription\", \"explanation\": \"wrong ring\"}";
  }
  std::vector<llm::TokenLogProb> first_token_logprobs(const llm::ChatPrompt&, const llm::GenerationParams&,
                                                      int) override {
    return {};
  }
};

}  // namespace

TEST_CASE("prompt golden files") {
  const auto inputs = Json::parse(read_file(kGolden + "inputs.json"));
  const auto smiles = inputs.at("smiles").get<std::string>();
  const auto description = inputs.at("description").get<std::string>();
  using predict::Task;
  for (auto [task, name] : {std::pair{Task::HIV, "task_hiv"}, std::pair{Task::BBBP, "task_bbbp"},
                            std::pair{Task::Clintox, "task_clintox"}, std::pair{Task::SIDER, "task_sider"},
                            std::pair{Task::Tox21, "task_tox21"}}) {
    check_golden(predict::build_task_prompt(smiles, description, task), name);
  }
  check_golden(describe::build_description_prompt(smiles), "description");
  check_golden(build_annotation_prompt(smiles, description), "annotation");
}

TEST_CASE("annotation prompt") {
  const auto prompt = build_annotation_prompt("CCO", "This molecule cures headaches.");
  CHECK(prompt.user.starts_with("CCO Your task is to identify"));
  CHECK(prompt.user.find("Molecule: CCO\nHallucination: \"This molecule cures headaches.\"\n") != std::string::npos);
  const auto block = category_block();
  CHECK(std::count(block.begin(), block.end(), '\n') == 4);
  CHECK(prompt.user.find(block) != std::string::npos);
  CHECK(code_of([] { build_annotation_prompt("CCO", ""); }) == ErrorCode::EmptyInput);
  CHECK(code_of([] { build_annotation_prompt(" ", "text"); }) == ErrorCode::EmptyInput);
}

TEST_CASE("category names") {
  for (auto t : kAllTypes) CHECK(parse_type(display_name(t)) == t);
  CHECK(parse_type("structural MISDESCRIPTION") == HT::StructuralMisdescription);
  CHECK(parse_type("StructuralMisdescription") == HT::StructuralMisdescription);
  CHECK(parse_type("generic_fluff") == HT::GenericFluff);
  CHECK(code_of([] { parse_type("Chemical nonsense"); }) == ErrorCode::UnknownCategory);
}

TEST_CASE("parse annotation replies") {
  const auto direct = parse_annotation_response(
      R"({"smiles":"CCO","categories":["Structural misdescription","Generic fluff"],"explanation":"x"})");
  CHECK(direct.smiles == "CCO");
  CHECK(direct.types == std::vector<HT>{HT::StructuralMisdescription, HT::GenericFluff});
  CHECK(direct.explanation == "x");

  const auto fenced = parse_annotation_response(
      "Sure! ```json\n{\"SMILES\": \"c1ccccc1\", \"category_names\": [\"Functional hallucination\", "
      "\"functional hallucination\"], \"explanation\": \"uses {braces} and \\\"quotes\\\"\"}\n``` Hope it helps.");
  CHECK(fenced.smiles == "c1ccccc1");
  CHECK(fenced.types == std::vector<HT>{HT::FunctionalHallucination});
  CHECK(fenced.explanation == "uses {braces} and \"quotes\"");

  const auto after_noise = parse_annotation_response(
      "Thinking {not json} ... {\"smiles\":\"C\",\"category\":\"No hallucination\",\"explanation\":\"ok\"}");
  CHECK(after_noise.types == std::vector<HT>{HT::NoHallucination});

  CHECK(code_of([] {
          parse_annotation_response(
              R"({"smiles":"C","categories":["No hallucination","Generic fluff"],"explanation":"e"})");
        }) == ErrorCode::MixedNoHallucination);
  CHECK(code_of([] { parse_annotation_response("no braces here"); }) == ErrorCode::NoJsonFound);
  CHECK(code_of([] { parse_annotation_response(R"({"smiles":"C","explanation":"e"})"); }) == ErrorCode::MissingField);
  CHECK(code_of([] { parse_annotation_response(R"({"smiles":"C","categories":[],"explanation":"e"})"); }) ==
        ErrorCode::MissingField);
  CHECK(code_of([] {
          parse_annotation_response(R"({"smiles":"C","categories":["Made up"],"explanation":"e"})");
        }) == ErrorCode::UnknownCategory);
  CHECK(code_of([] {
          parse_annotation_response(R"(Sure: {"smiles":"C","categories":"Generic fluff","explanation":"e"})", true);
        }) == ErrorCode::NoJsonFound);
  CHECK(parse_annotation_response(R"( {"smiles":"C","categories":"Generic fluff","explanation":"e"} )", true).types ==
        std::vector<HT>{HT::GenericFluff});
}

TEST_CASE("annotation records round-trip") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    AnnotationRecord r;
    r.smiles = "C" + std::to_string(trial);
    r.description = "desc " + std::to_string(trial);
    r.explanation = trial % 3 == 0 ? "" : "because";
    if (trial % 7 == 0) {
      r.types = {HT::NoHallucination};
    } else {
      std::vector<HT> pool(kAllTypes.begin(), kAllTypes.end() - 1);
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(std::uniform_int_distribution<std::size_t>(1, 4)(rng));
      r.types = pool;
    }
    const auto back = annotation_from_json(to_json(r));
    CHECK(back == r);
    CHECK(annotation_from_json(to_json(back)) == back);
  }
}

TEST_CASE("type distribution") {
  std::vector<AnnotationRecord> ten(10, AnnotationRecord{"C", "d", {HT::StructuralMisdescription}, ""});
  const auto all = type_distribution(ten);
  CHECK(all.size() == 1);
  CHECK(all.at(HT::StructuralMisdescription) == 1.0);

  std::vector<AnnotationRecord> mixed;
  for (int i = 0; i < 85; ++i) mixed.push_back({"C", "d", {HT::StructuralMisdescription, HT::GenericFluff}, ""});
  for (int i = 0; i < 12; ++i) mixed.push_back({"C", "d", {HT::FunctionalHallucination}, ""});
  for (int i = 0; i < 2; ++i) mixed.push_back({"C", "d", {HT::GenericFluff}, ""});
  mixed.push_back({"C", "d", {HT::AnalogicalHallucination}, ""});
  const auto dist = type_distribution(mixed);
  CHECK(dist.at(HT::StructuralMisdescription) == doctest::Approx(0.85));
  CHECK(dist.at(HT::FunctionalHallucination) == doctest::Approx(0.12));
  CHECK(dist.at(HT::GenericFluff) + dist.at(HT::AnalogicalHallucination) == doctest::Approx(0.03));
  double total = 0.0;
  for (const auto& [t, p] : dist) total += p;
  CHECK(std::abs(total - 1.0) <= 1e-9);
  CHECK(code_of([] { type_distribution({}); }) == ErrorCode::EmptyInput);
}

TEST_CASE("batch annotation with the mock backend") {
  llm::Gateway gateway(std::make_shared<llm::MockBackend>(5));
  std::vector<AnnotationInput> inputs;
  for (int i = 0; i < 30; ++i) inputs.push_back({std::string(i % 6 + 1, 'C') + "O" + std::to_string(i), "A claim."});
  const auto batch = annotate_batch(gateway, inputs, {"mock-annotator"});
  REQUIRE(batch.records.size() == 30);
  CHECK(batch.failed.empty());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    CHECK(batch.records[i].smiles == inputs[i].smiles);
    CHECK(batch.records[i].description == "A claim.");
  }
  double total = 0.0;
  for (const auto& [t, p] : type_distribution(batch.records)) total += p;
  CHECK(std::abs(total - 1.0) <= 1e-9);
}

TEST_CASE("malformed annotator replies are skipped and counted") {
  llm::Gateway gateway(std::make_shared<FlakyAnnotator>());
  std::vector<AnnotationInput> inputs;
  for (std::size_t len = 1; len <= 20; ++len) inputs.push_back({std::string(len, 'C'), "Some description."});
  const auto batch = annotate_batch(gateway, inputs, {"m"});
  CHECK(batch.records.size() == 18);
  REQUIRE(batch.failed.size() == 2);
  CHECK(batch.failed[0].index == 9);
  CHECK(batch.failed[1].index == 19);
  CHECK(batch.failed[0].reason.find("NoJsonFound") != std::string::npos);
}
