#pragma once

#include <string>
#include <vector>

#include "hallubench/llm/types.hpp"

namespace hallubench::predict {

struct YesNo {
  bool yes = false;
  double p_yes = 0.0;
};

// Lower-cased token with surrounding whitespace and BPE/SentencePiece word
// markers removed.
std::string normalize_token(std::string_view token);

// Each class scores the best logprob among its variants ("Yes", " yes",
// "YES", ...). The two scores are renormalized against each other; a class
// with no variant scores zero probability. Exact ties answer No. Throws
// NoCandidateTokens when neither class appears.
YesNo decode_yes_no(const std::vector<llm::TokenLogProb>& logprobs);

// For backends without logprobs: a leading yes/no word maps to p_yes 0.99 or
// 0.01. Throws NoCandidateTokens otherwise.
YesNo decode_text_answer(std::string_view text);

}  // namespace hallubench::predict
