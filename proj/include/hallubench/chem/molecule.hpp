#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hallubench::chem {

enum class BondOrder : std::uint8_t { Single, Double, Triple, Aromatic };

// Directional marker from '/' or '\'. Retained from the input but never
// interpreted.
enum class BondStereo : std::uint8_t { None, Up, Down };

struct Atom {
  int atomic_number = 6;
  int charge = 0;
  std::optional<int> isotope;
  // Present exactly for bracket atoms; bracket atoms carry no implicit H.
  std::optional<int> explicit_h;
  bool aromatic = false;
  std::string chirality;  // "@" / "@@" or empty
  std::size_t index = 0;

  std::string_view symbol() const noexcept;
  bool is_bracket() const noexcept { return explicit_h.has_value(); }
};

struct Bond {
  std::size_t begin = 0;
  std::size_t end = 0;
  BondOrder order = BondOrder::Single;
  BondStereo stereo = BondStereo::None;

  std::size_t other(std::size_t atom) const noexcept { return atom == begin ? end : begin; }
};

// Integer contribution of a bond to its endpoints' valence; aromatic counts 1.
int valence_contribution(BondOrder order) noexcept;

struct Neighbor {
  std::size_t atom;
  std::size_t bond;
};

// Immutable molecular graph. The constructor validates the graph and derives
// implicit hydrogens, ring membership, and connected components.
class Molecule {
 public:
  Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds, std::string source_smiles = {});

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<Bond>& bonds() const noexcept { return bonds_; }
  const std::string& source_smiles() const noexcept { return source_smiles_; }

  std::size_t atom_count() const noexcept { return atoms_.size(); }
  std::size_t bond_count() const noexcept { return bonds_.size(); }

  std::span<const Neighbor> neighbors(std::size_t atom) const noexcept { return adjacency_[atom]; }
  std::size_t degree(std::size_t atom) const noexcept { return adjacency_[atom].size(); }
  int bond_order_sum(std::size_t atom) const noexcept;

  int implicit_hydrogens(std::size_t atom) const noexcept { return implicit_h_[atom]; }
  int total_hydrogens(std::size_t atom) const noexcept;
  // Implicit plus bracket hydrogens over all atoms.
  int hydrogen_count() const noexcept;

  bool is_ring_bond(std::size_t bond) const noexcept { return ring_bond_[bond]; }
  bool in_ring(std::size_t atom) const noexcept { return ring_atom_[atom]; }

  // Cyclomatic number: independent cycles in the graph.
  std::size_t ring_count() const noexcept;
  std::size_t component_count() const noexcept { return component_count_; }
  std::size_t component_of(std::size_t atom) const noexcept { return component_[atom]; }

  std::optional<std::size_t> bond_between(std::size_t a, std::size_t b) const noexcept;

 private:
  void build_adjacency();
  void find_ring_bonds();
  void find_components();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::string source_smiles_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<int> implicit_h_;
  std::vector<bool> ring_bond_;
  std::vector<bool> ring_atom_;
  std::vector<std::size_t> component_;
  std::size_t component_count_ = 0;
};

}  // namespace hallubench::chem
