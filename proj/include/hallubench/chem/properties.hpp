#pragma once

#include <map>
#include <string>

#include "hallubench/chem/molecule.hpp"

namespace hallubench::chem {

// Element symbol -> count, hydrogens (implicit and bracket) included.
std::map<std::string, int> element_counts(const Molecule& molecule);

// Hill-ordered formula: C, then H, then the rest alphabetically; fully
// alphabetical when there is no carbon. Charges are not written.
std::string molecular_formula(const Molecule& molecule);

// Grams per mole from standard atomic weights, with isotope-labelled atoms
// using their isotopic mass.
double molecular_weight(const Molecule& molecule);

std::size_t heavy_atom_count(const Molecule& molecule);

}  // namespace hallubench::chem
