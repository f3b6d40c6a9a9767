#include "hallubench/metrics/auc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "hallubench/util/error.hpp"

namespace hallubench::metrics {

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(scores.size()) + " scores for " + std::to_string(labels.size()) + " labels");
  }
  std::int64_t positives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    if (std::isnan(scores[i])) throw Error(ErrorCode::InvalidArgument, "NaN score");
    positives += labels[i];
  }
  const auto negatives = static_cast<std::int64_t>(labels.size()) - positives;
  if (positives == 0 || negatives == 0) throw Error(ErrorCode::UndefinedAUC, "labels contain a single class");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the rank sum of the positives, so tied average ranks stay integral.
  std::int64_t doubled_rank_sum = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const auto doubled_rank = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) doubled_rank_sum += doubled_rank;
    }
    i = j;
  }
  const std::int64_t doubled_u = doubled_rank_sum - positives * (positives + 1);
  return static_cast<double>(doubled_u) / static_cast<double>(2 * positives * negatives);
}

}  // namespace hallubench::metrics
