#include "hallubench/predict/decode.hpp"

#include <cmath>
#include <limits>

#include "hallubench/util/error.hpp"
#include "hallubench/util/io.hpp"

namespace hallubench::predict {

std::string normalize_token(std::string_view token) {
  static constexpr std::string_view kMarkers[] = {"\xC4\xA0", "\xE2\x96\x81", "\xC4\x8A"};  // Ġ ▁ Ċ
  bool stripped = true;
  while (stripped) {
    stripped = false;
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) {
      token.remove_prefix(1);
      stripped = true;
    }
    for (auto marker : kMarkers) {
      if (token.starts_with(marker)) {
        token.remove_prefix(marker.size());
        stripped = true;
      }
    }
  }
  return to_lower(trim(token));
}

YesNo decode_yes_no(const std::vector<llm::TokenLogProb>& logprobs) {
  constexpr double kMissing = -std::numeric_limits<double>::infinity();
  double yes = kMissing;
  double no = kMissing;
  for (const auto& t : logprobs) {
    const auto norm = normalize_token(t.token);
    if (norm == "yes") yes = std::max(yes, t.logprob);
    if (norm == "no") no = std::max(no, t.logprob);
  }
  if (yes == kMissing && no == kMissing) {
    throw Error(ErrorCode::NoCandidateTokens, "neither Yes nor No among " + std::to_string(logprobs.size()) +
                                                  " candidate tokens");
  }
  double p_yes = 0.0;
  if (yes == kMissing) {
    p_yes = 0.0;
  } else if (no == kMissing) {
    p_yes = 1.0;
  } else {
    p_yes = 1.0 / (1.0 + std::exp(no - yes));
  }
  return {yes > no, p_yes};
}

YesNo decode_text_answer(std::string_view text) {
  auto lower = to_lower(trim(text));
  std::size_t end = 0;
  while (end < lower.size() && std::isalpha(static_cast<unsigned char>(lower[end]))) ++end;
  const auto word = lower.substr(0, end);
  if (word == "yes") return {true, 0.99};
  if (word == "no") return {false, 0.01};
  throw Error(ErrorCode::NoCandidateTokens, "answer does not start with yes or no: '" + std::string(text) + "'");
}

}  // namespace hallubench::predict
