#pragma once

#include <string>
#include <string_view>

#include "hallubench/chem/molecule.hpp"

namespace hallubench::chem {

// Parses the supported SMILES subset: organic-subset and bracket atoms
// (isotope, chirality, H count, charge, atom class), aromatic lower-case
// atoms, bonds - = # : / \, branches, ring closures including %nn, and
// dot-separated components. Leading and trailing whitespace is ignored.
//
// Throws Error with EmptyInput, UnclosedRing, UnbalancedParen,
// UnknownElement, MalformedBracketAtom, or MalformedSmiles (any other
// syntax problem). Never crashes on arbitrary bytes.
Molecule parse_smiles(std::string_view text);

// Deterministic SMILES that is identical for any two inputs describing the
// same graph. Stereo markers are dropped.
std::string canonical_smiles(const Molecule& molecule);

// Canonical ranks (0..n-1) used to order the canonical traversal.
std::vector<std::size_t> canonical_ranks(const Molecule& molecule);

}  // namespace hallubench::chem
