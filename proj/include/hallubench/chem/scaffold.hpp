#pragma once

#include <optional>
#include <string>

#include "hallubench/chem/molecule.hpp"

namespace hallubench::chem {

struct Scaffold {
  std::string smiles;  // canonical; empty for acyclic molecules
  bool is_empty = true;

  bool operator==(const Scaffold&) const = default;
};

// Bemis-Murcko framework as a molecule: ring systems plus ring-to-ring
// linkers, with every acyclic side chain pruned. nullopt for acyclic input.
// Bracket atoms that lose neighbours gain the hydrogens needed to keep their
// valence.
std::optional<Molecule> murcko_framework(const Molecule& molecule);

Scaffold murcko_scaffold(const Molecule& molecule);

}  // namespace hallubench::chem
