#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hallubench/data/dataset.hpp"

namespace hallubench::data {

struct SplitFractions {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

struct SplitAssignment {
  // Row indices (LabeledMolecule::row_index), ascending within each partition.
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;
  SplitFractions fractions;
};

// Throws InvalidArgument unless all fractions are positive and sum to 1.
void validate_fractions(const SplitFractions& fractions);

// Grouping key for scaffold splits: the canonical Murcko scaffold, or the
// canonical SMILES of the molecule itself when it has no ring.
std::string scaffold_group_key(const std::string& smiles);

// Whole scaffold groups, largest first (ties by key), are placed greedily
// into train until it would overflow floor(train*n), then into valid up to
// floor((train+valid)*n), then into test.
SplitAssignment scaffold_split(const std::vector<LabeledMolecule>& records, const SplitFractions& fractions);

// Fisher-Yates shuffle driven by std::mt19937_64(seed) with rejection-sampled
// bounded draws, so the permutation is identical on every platform. The
// shuffled order is cut into train, valid, test with floor(f*n) rows for
// valid and test and the remainder for train.
SplitAssignment random_split(const std::vector<LabeledMolecule>& records, const SplitFractions& fractions,
                             std::uint64_t seed);

SplitAssignment make_split(const std::vector<LabeledMolecule>& records, SplitKind kind,
                           const SplitFractions& fractions, std::uint64_t seed);

}  // namespace hallubench::data
