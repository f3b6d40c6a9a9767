#include "hallubench/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

#include "hallubench/chem/scaffold.hpp"
#include "hallubench/chem/smiles.hpp"
#include "hallubench/util/concurrency.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::data {
namespace {

std::size_t floor_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

void sort_partitions(SplitAssignment& split) {
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.valid.begin(), split.valid.end());
  std::sort(split.test.begin(), split.test.end());
}

}  // namespace

void validate_fractions(const SplitFractions& f) {
  if (!(f.train > 0.0 && f.valid > 0.0 && f.test > 0.0) || std::abs(f.train + f.valid + f.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "split fractions must be positive and sum to 1");
  }
}

std::string scaffold_group_key(const std::string& smiles) {
  const auto molecule = chem::parse_smiles(smiles);
  auto scaffold = chem::murcko_scaffold(molecule);
  return scaffold.is_empty ? chem::canonical_smiles(molecule) : std::move(scaffold.smiles);
}

SplitAssignment scaffold_split(const std::vector<LabeledMolecule>& records, const SplitFractions& fractions) {
  validate_fractions(fractions);
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records to split");

  std::vector<std::string> keys(records.size());
  parallel_for_index(records.size(), std::max(1u, std::thread::hardware_concurrency()),
                     [&](std::size_t i) { keys[i] = scaffold_group_key(records[i].smiles); });

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) groups[keys[i]].push_back(records[i].row_index);
  std::vector<const std::pair<const std::string, std::vector<std::size_t>>*> ordered;
  for (const auto& entry : groups) ordered.push_back(&entry);
  // std::map iteration is already key-ascending, so a stable sort on size keeps the tie order.
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return a->second.size() > b->second.size(); });

  const std::size_t n = records.size();
  const std::size_t train_cut = floor_count(fractions.train, n);
  const std::size_t valid_cut = floor_count(fractions.train + fractions.valid, n);
  SplitAssignment split;
  split.fractions = fractions;
  for (const auto* group : ordered) {
    const auto& rows = group->second;
    std::vector<std::size_t>* target = &split.train;
    if (split.train.size() + rows.size() > train_cut) {
      target = split.train.size() + split.valid.size() + rows.size() > valid_cut ? &split.test : &split.valid;
    }
    target->insert(target->end(), rows.begin(), rows.end());
  }
  sort_partitions(split);
  return split;
}

SplitAssignment random_split(const std::vector<LabeledMolecule>& records, const SplitFractions& fractions,
                             std::uint64_t seed) {
  validate_fractions(fractions);
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records to split");

  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) order[i] = records[i].row_index;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);

  const std::size_t n = records.size();
  const std::size_t n_valid = floor_count(fractions.valid, n);
  const std::size_t n_test = floor_count(fractions.test, n);
  const std::size_t n_train = n - n_valid - n_test;
  SplitAssignment split;
  split.fractions = fractions;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.valid.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                     order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), order.end());
  sort_partitions(split);
  return split;
}

SplitAssignment make_split(const std::vector<LabeledMolecule>& records, SplitKind kind,
                           const SplitFractions& fractions, std::uint64_t seed) {
  return kind == SplitKind::Scaffold ? scaffold_split(records, fractions) : random_split(records, fractions, seed);
}

}  // namespace hallubench::data
