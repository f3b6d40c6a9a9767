#include "hallubench/chem/molecule.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "hallubench/chem/elements.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::chem {

std::string_view Atom::symbol() const noexcept { return element_symbol(atomic_number); }

int valence_contribution(BondOrder order) noexcept {
  switch (order) {
    case BondOrder::Single: return 1;
    case BondOrder::Double: return 2;
    case BondOrder::Triple: return 3;
    case BondOrder::Aromatic: return 1;
  }
  return 1;
}

Molecule::Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds, std::string source_smiles)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)), source_smiles_(std::move(source_smiles)) {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    auto& atom = atoms_[i];
    atom.index = i;
    if (element_symbol(atom.atomic_number).empty()) {
      throw Error(ErrorCode::UnknownElement, "atomic number " + std::to_string(atom.atomic_number));
    }
    if (atom.explicit_h && *atom.explicit_h < 0) {
      throw Error(ErrorCode::MalformedBracketAtom, "negative hydrogen count");
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& bond : bonds_) {
    if (bond.begin >= atoms_.size() || bond.end >= atoms_.size()) {
      throw Error(ErrorCode::MalformedSmiles, "bond endpoint out of range");
    }
    if (bond.begin == bond.end) throw Error(ErrorCode::MalformedSmiles, "bond from an atom to itself");
    const auto key = std::minmax(bond.begin, bond.end);
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::MalformedSmiles, "duplicate bond between atoms " + std::to_string(key.first) +
                                                  " and " + std::to_string(key.second));
    }
  }
  build_adjacency();
  find_ring_bonds();
  find_components();

  for (const auto& atom : atoms_) {
    if (atom.aromatic && !ring_atom_[atom.index]) {
      throw Error(ErrorCode::MalformedSmiles,
                  "aromatic atom " + std::to_string(atom.index) + " is not in a ring");
    }
  }

  implicit_h_.assign(atoms_.size(), 0);
  for (const auto& atom : atoms_) {
    if (atom.is_bracket()) continue;
    implicit_h_[atom.index] =
        default_implicit_hydrogens(atom.atomic_number, atom.aromatic, bond_order_sum(atom.index)).value_or(0);
  }
}

void Molecule::build_adjacency() {
  adjacency_.assign(atoms_.size(), {});
  for (std::size_t b = 0; b < bonds_.size(); ++b) {
    adjacency_[bonds_[b].begin].push_back({bonds_[b].end, b});
    adjacency_[bonds_[b].end].push_back({bonds_[b].begin, b});
  }
}

// Bridges are exactly the non-ring bonds. Iterative Tarjan low-link search so
// that long chains cannot exhaust the call stack.
void Molecule::find_ring_bonds() {
  const std::size_t n = atoms_.size();
  ring_bond_.assign(bonds_.size(), true);
  ring_atom_.assign(n, false);
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> order(n, kUnvisited);
  std::vector<std::size_t> low(n, 0);
  std::size_t counter = 0;

  struct Frame {
    std::size_t atom;
    std::size_t parent_bond;
    std::size_t next_neighbor;
  };
  std::vector<Frame> stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != kUnvisited) continue;
    order[root] = low[root] = counter++;
    stack.push_back({root, kUnvisited, 0});
    while (!stack.empty()) {
      auto& frame = stack.back();
      const auto& adj = adjacency_[frame.atom];
      if (frame.next_neighbor < adj.size()) {
        const Neighbor nb = adj[frame.next_neighbor++];
        if (nb.bond == frame.parent_bond) continue;
        if (order[nb.atom] == kUnvisited) {
          order[nb.atom] = low[nb.atom] = counter++;
          stack.push_back({nb.atom, nb.bond, 0});
        } else {
          low[frame.atom] = std::min(low[frame.atom], order[nb.atom]);
        }
        continue;
      }
      const Frame done = frame;
      stack.pop_back();
      if (!stack.empty()) {
        auto& parent = stack.back();
        low[parent.atom] = std::min(low[parent.atom], low[done.atom]);
        if (low[done.atom] > order[parent.atom]) ring_bond_[done.parent_bond] = false;
      }
    }
  }
  for (std::size_t b = 0; b < bonds_.size(); ++b) {
    if (ring_bond_[b]) {
      ring_atom_[bonds_[b].begin] = true;
      ring_atom_[bonds_[b].end] = true;
    }
  }
}

void Molecule::find_components() {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  component_.assign(atoms_.size(), kUnset);
  component_count_ = 0;
  std::vector<std::size_t> queue;
  for (std::size_t start = 0; start < atoms_.size(); ++start) {
    if (component_[start] != kUnset) continue;
    queue.assign(1, start);
    component_[start] = component_count_;
    while (!queue.empty()) {
      const std::size_t a = queue.back();
      queue.pop_back();
      for (const auto& nb : adjacency_[a]) {
        if (component_[nb.atom] == kUnset) {
          component_[nb.atom] = component_count_;
          queue.push_back(nb.atom);
        }
      }
    }
    ++component_count_;
  }
}

int Molecule::bond_order_sum(std::size_t atom) const noexcept {
  int sum = 0;
  for (const auto& nb : adjacency_[atom]) sum += valence_contribution(bonds_[nb.bond].order);
  return sum;
}

int Molecule::total_hydrogens(std::size_t atom) const noexcept {
  const auto& a = atoms_[atom];
  return a.explicit_h ? *a.explicit_h : implicit_h_[atom];
}

int Molecule::hydrogen_count() const noexcept {
  int total = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) total += total_hydrogens(i);
  return total;
}

std::size_t Molecule::ring_count() const noexcept {
  return bonds_.size() + component_count_ - atoms_.size();
}

std::optional<std::size_t> Molecule::bond_between(std::size_t a, std::size_t b) const noexcept {
  for (const auto& nb : adjacency_[a]) {
    if (nb.atom == b) return nb.bond;
  }
  return std::nullopt;
}

}  // namespace hallubench::chem
