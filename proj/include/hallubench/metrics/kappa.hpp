#pragma once

#include <string>
#include <vector>

namespace hallubench::metrics {

// Fleiss' kappa over an items x raters matrix of category names. Every item
// needs the same number of raters (at least two). Returns 1.0 when every
// rating falls in one category.
// Errors: EmptyInput, TooFewRaters, LengthMismatch, UnknownCategory.
double fleiss_kappa(const std::vector<std::vector<std::string>>& ratings, const std::vector<std::string>& categories);

}  // namespace hallubench::metrics
