#include "hallubench/chem/scaffold.hpp"

#include <vector>

#include "hallubench/chem/smiles.hpp"

namespace hallubench::chem {

std::optional<Molecule> murcko_framework(const Molecule& m) {
  const std::size_t n = m.atom_count();
  bool any_ring = false;
  for (std::size_t a = 0; a < n; ++a) any_ring = any_ring || m.in_ring(a);
  if (!any_ring) return std::nullopt;

  std::vector<bool> keep(n, true);
  std::vector<std::size_t> degree(n);
  std::vector<std::size_t> queue;
  for (std::size_t a = 0; a < n; ++a) {
    degree[a] = m.degree(a);
    if (!m.in_ring(a) && degree[a] <= 1) queue.push_back(a);
  }
  // Peel terminal non-ring atoms until only rings and linkers remain.
  while (!queue.empty()) {
    const std::size_t a = queue.back();
    queue.pop_back();
    if (!keep[a]) continue;
    keep[a] = false;
    for (const auto& nb : m.neighbors(a)) {
      if (!keep[nb.atom]) continue;
      if (--degree[nb.atom] <= 1 && !m.in_ring(nb.atom)) queue.push_back(nb.atom);
    }
  }

  std::vector<std::size_t> remap(n, static_cast<std::size_t>(-1));
  std::vector<Atom> atoms;
  for (std::size_t a = 0; a < n; ++a) {
    if (!keep[a]) continue;
    remap[a] = atoms.size();
    Atom atom = m.atoms()[a];
    atom.chirality.clear();
    if (atom.explicit_h) {
      int lost = 0;
      for (const auto& nb : m.neighbors(a)) {
        if (!keep[nb.atom]) lost += valence_contribution(m.bonds()[nb.bond].order);
      }
      *atom.explicit_h += lost;
    }
    atoms.push_back(std::move(atom));
  }
  std::vector<Bond> bonds;
  for (const auto& bond : m.bonds()) {
    if (keep[bond.begin] && keep[bond.end]) {
      bonds.push_back({remap[bond.begin], remap[bond.end], bond.order, BondStereo::None});
    }
  }
  Molecule framework(std::move(atoms), std::move(bonds));
  return Molecule(framework.atoms(), framework.bonds(), canonical_smiles(framework));
}

Scaffold murcko_scaffold(const Molecule& m) {
  const auto framework = murcko_framework(m);
  if (!framework) return Scaffold{};
  return Scaffold{framework->source_smiles(), false};
}

}  // namespace hallubench::chem
