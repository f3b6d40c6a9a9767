#pragma once

#include <span>

namespace hallubench::metrics {

// Area under the ROC curve, computed from average rank sums. Equals the
// fraction of (positive, negative) pairs ranked correctly, ties counting half.
// Throws UndefinedAUC when only one class is present, LengthMismatch when the
// spans differ in length.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace hallubench::metrics
