#include "hallubench/metrics/kappa.hpp"

#include <algorithm>
#include <map>

#include "hallubench/util/error.hpp"

namespace hallubench::metrics {

double fleiss_kappa(const std::vector<std::vector<std::string>>& ratings, const std::vector<std::string>& categories) {
  if (ratings.empty()) throw Error(ErrorCode::EmptyInput, "no annotated items");
  const std::size_t raters = ratings.front().size();
  if (raters < 2) throw Error(ErrorCode::TooFewRaters, "Fleiss' kappa needs at least two raters per item");

  std::map<std::string, std::size_t> index;
  for (const auto& c : categories) index.emplace(c, index.size());

  std::vector<double> totals(index.size(), 0.0);
  double agreement_sum = 0.0;
  for (const auto& item : ratings) {
    if (item.size() != raters) {
      throw Error(ErrorCode::LengthMismatch, "items have differing numbers of raters");
    }
    std::vector<double> counts(index.size(), 0.0);
    for (const auto& rating : item) {
      const auto it = index.find(rating);
      if (it == index.end()) throw Error(ErrorCode::UnknownCategory, "unknown category '" + rating + "'");
      counts[it->second] += 1.0;
    }
    double pairs = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      pairs += counts[j] * (counts[j] - 1.0);
      totals[j] += counts[j];
    }
    const auto n = static_cast<double>(raters);
    agreement_sum += pairs / (n * (n - 1.0));
  }

  const auto items = static_cast<double>(ratings.size());
  const double observed = agreement_sum / items;
  double expected = 0.0;
  for (double t : totals) {
    const double p = t / (items * static_cast<double>(raters));
    expected += p * p;
  }
  // Every rating in one category: agreement is perfect and chance agreement is 1.
  if (std::any_of(totals.begin(), totals.end(), [&](double t) { return t == items * static_cast<double>(raters); })) {
    return 1.0;
  }
  return (observed - expected) / (1.0 - expected);
}

}  // namespace hallubench::metrics
