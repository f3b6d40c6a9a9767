#include <doctest.h>

#include <cmath>
#include <random>

#include "hallubench/predict/decode.hpp"
#include "hallubench/predict/predictor.hpp"
#include "hallubench/predict/task.hpp"
#include "hallubench/util/error.hpp"

using namespace hallubench;
using namespace hallubench::predict;
using llm::TokenLogProb;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

// Two-way softmax written directly from the definition, in long double.
double softmax_yes(double yes, double no) {
  const long double a = std::exp(static_cast<long double>(yes));
  const long double b = std::exp(static_cast<long double>(no));
  return static_cast<double>(a / (a + b));
}

// A backend whose logprob endpoint is unsupported and whose text answers are
// scripted per SMILES.
class TextOnlyBackend : public llm::Backend {
 public:
  llm::BackendKind kind() const noexcept override { return llm::BackendKind::OpenAICompatible; }
  std::string identity() const override { return "text-only"; }
  int max_concurrency() const noexcept override { return 3; }
  std::string chat_complete(const llm::ChatPrompt& prompt, const llm::GenerationParams& params) override {
    CHECK(params.max_tokens <= 4);
    if (prompt.user.starts_with("CCO")) return "Yes.";
    if (prompt.user.starts_with("CCN")) return "I cannot say";
    return " no";
  }
  std::vector<TokenLogProb> first_token_logprobs(const llm::ChatPrompt&, const llm::GenerationParams&,
                                                 int) override {
    throw Error(ErrorCode::LogprobsUnsupported, "no logprobs here");
  }
};

std::vector<PredictionInput> twenty_inputs(std::size_t uncovered) {
  std::vector<PredictionInput> inputs;
  for (std::size_t i = 0; i < 20; ++i) {
    PredictionInput in;
    in.molecule = {std::string(i + 1, 'C') + "O", static_cast<int>(i % 2), i};
    if (i >= uncovered) in.description = "A description of molecule " + std::to_string(i) + ".";
    inputs.push_back(in);
  }
  return inputs;
}

}  // namespace

TEST_CASE("task prompts") {
  const auto hiv = build_task_prompt("CCO", "", Task::HIV);
  CHECK(hiv.system == "You are an expert in drug discovery.");
  CHECK(hiv.user == "CCO\nDoes the molecule have the ability to inhibit HIV replication? Only answer Yes or No:");
  CHECK(build_task_prompt("CCO", "A small alcohol.", Task::BBBP).user ==
        "CCO A small alcohol.\nDoes the molecule have the ability to penetrate the blood-brain barrier? Only answer "
        "Yes or No:");
  CHECK(build_task_prompt("CCO", "   ", Task::HIV).user == hiv.user);
  CHECK(code_of([] { parse_task("XYZ"); }) == ErrorCode::UnknownTask);
  CHECK(parse_task("tox21") == Task::Tox21);
  for (auto task : {Task::HIV, Task::BBBP, Task::Clintox, Task::SIDER, Task::Tox21}) {
    CHECK(task_instruction(task).ends_with("Only answer Yes or No:"));
    CHECK(parse_task(to_string(task)) == task);
  }
}

TEST_CASE("decode fixtures") {
  const auto simple = decode_yes_no({{"Yes", -0.1}, {"No", -2.3}});
  CHECK(simple.yes);
  CHECK(std::abs(simple.p_yes - 0.9002) <= 0.0005);
  CHECK(simple.p_yes == doctest::Approx(softmax_yes(-0.1, -2.3)).epsilon(1e-12));

  const auto tie = decode_yes_no({{"Yes", -1.0}, {"No", -1.0}});
  CHECK_FALSE(tie.yes);
  CHECK(tie.p_yes == 0.5);

  const auto variants = decode_yes_no({{"Yes", -1.0}, {" Yes", -0.5}, {"No", -2.0}, {" no", -3.0}});
  CHECK(variants.yes);
  CHECK(std::abs(variants.p_yes - 0.8176) <= 0.0005);
  CHECK(variants.p_yes == doctest::Approx(softmax_yes(-0.5, -2.0)).epsilon(1e-12));
}

TEST_CASE("token normalization") {
  CHECK(normalize_token(" Yes") == "yes");
  CHECK(normalize_token("\xC4\xA0No") == "no");
  CHECK(normalize_token("\xE2\x96\x81YES") == "yes");
  CHECK(normalize_token("\n no ") == "no");
  CHECK(normalize_token("Maybe") == "maybe");
  CHECK(normalize_token("Yesterday") == "yesterday");
}

TEST_CASE("decode edge cases") {
  CHECK(code_of([] { decode_yes_no({{"Maybe", -0.1}, {"The", -0.5}}); }) == ErrorCode::NoCandidateTokens);
  CHECK(code_of([] { decode_yes_no({}); }) == ErrorCode::NoCandidateTokens);
  const auto only_yes = decode_yes_no({{"Yes", -3.0}, {"Maybe", -0.1}});
  CHECK(only_yes.yes);
  CHECK(only_yes.p_yes == 1.0);
  const auto only_no = decode_yes_no({{"no", -3.0}});
  CHECK_FALSE(only_no.yes);
  CHECK(only_no.p_yes == 0.0);
  CHECK(decode_yes_no({{"Yesterday", -0.1}, {"No", -2.0}}).p_yes == 0.0);
}

TEST_CASE("argmax and probability are invariant under a constant shift") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> lp(-12.0, 0.0);
  std::uniform_real_distribution<double> shift(-20.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const double y = lp(rng), n = lp(rng), c = shift(rng);
    const auto base = decode_yes_no({{"Yes", y}, {"No", n}});
    const auto moved = decode_yes_no({{"Yes", y + c}, {"No", n + c}});
    CHECK(base.yes == moved.yes);
    CHECK(base.p_yes == doctest::Approx(moved.p_yes).epsilon(1e-9));
    CHECK(base.p_yes > 0.0);
    CHECK(base.p_yes < 1.0);
    CHECK(base.yes == (base.p_yes > 0.5));
    CHECK(base.p_yes == doctest::Approx(softmax_yes(y, n)).epsilon(1e-12));
  }
}

TEST_CASE("text answers") {
  CHECK(decode_text_answer("Yes").p_yes == 0.99);
  CHECK(decode_text_answer("  yes, it does").yes);
  CHECK(decode_text_answer("No.").p_yes == 0.01);
  CHECK(code_of([] { decode_text_answer("Possibly"); }) == ErrorCode::NoCandidateTokens);
  CHECK(code_of([] { decode_text_answer("Nope"); }) == ErrorCode::NoCandidateTokens);
}

TEST_CASE("mock predictions over twenty molecules are reproducible") {
  PredictOptions options;
  options.dataset = "HIV";
  options.setting = "llm_mock";
  options.params = {"mock-model"};
  auto run = [&] {
    llm::Gateway gateway(std::make_shared<llm::MockBackend>(42));
    return predict_batch(gateway, twenty_inputs(0), options);
  };
  const auto a = run();
  const auto b = run();
  REQUIRE(a.records.size() == 20);
  CHECK(a.records == b.records);
  CHECK(a.coverage() == 1.0);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& r = a.records[i];
    CHECK(r.row_index == i);
    CHECK(r.p_yes + r.p_no == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.predicted_yes == (r.p_yes > 0.5));
    CHECK(r.true_label == static_cast<int>(i % 2));
    CHECK(prediction_from_json(to_json(r)) == r);
  }
}

TEST_CASE("molecules without a description are excluded and counted") {
  llm::Gateway gateway(std::make_shared<llm::MockBackend>(1));
  PredictOptions options;
  options.params = {"m"};
  const auto batch = predict_batch(gateway, twenty_inputs(2), options);
  CHECK(batch.records.size() == 18);
  CHECK(batch.excluded == 2);
  CHECK(batch.coverage() == doctest::Approx(0.9));
}

TEST_CASE("text fallback when logprobs are unsupported") {
  llm::Gateway gateway(std::make_shared<TextOnlyBackend>());
  std::vector<PredictionInput> inputs = {{{"CCO", 1, 0}, ""}, {{"CCC", 0, 1}, ""}, {{"CCN", 0, 2}, ""}};
  PredictOptions options;
  options.params = {"m"};
  const auto batch = predict_batch(gateway, inputs, options);
  REQUIRE(batch.records.size() == 2);
  CHECK(batch.records[0].p_yes == 0.99);
  CHECK(batch.records[0].degraded);
  CHECK(batch.records[1].p_yes == 0.01);
  CHECK(batch.degraded == 2);
  REQUIRE(batch.skipped.size() == 1);
  CHECK(batch.skipped[0].row_index == 2);

  options.logprob_fallback = false;
  CHECK(code_of([&] { predict_batch(gateway, inputs, options); }) == ErrorCode::LogprobsUnsupported);
}
