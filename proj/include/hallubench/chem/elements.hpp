#pragma once

#include <optional>
#include <string_view>

namespace hallubench::chem {

inline constexpr int kMaxAtomicNumber = 118;

// Atomic number for a case-sensitive element symbol ("C", "Cl", ...).
std::optional<int> atomic_number(std::string_view symbol) noexcept;

std::string_view element_symbol(int atomic_number) noexcept;

// IUPAC abridged standard atomic weight; mass number of the longest-lived
// isotope for elements without a standard weight.
double standard_atomic_weight(int atomic_number) noexcept;

// Exact isotopic mass when tabulated, otherwise the mass number.
double isotope_mass(int atomic_number, int mass_number) noexcept;

// True for B, C, N, O, P, S, F, Cl, Br, I.
bool in_organic_subset(int atomic_number) noexcept;

// True for elements that may be written aromatic (lower-case).
bool may_be_aromatic(int atomic_number) noexcept;

// Hydrogens implied for an organic-subset atom written without brackets,
// given the sum of its bond orders (aromatic bonds counted as 1). Returns
// nullopt for atoms outside the organic subset.
std::optional<int> default_implicit_hydrogens(int atomic_number, bool aromatic, int bond_order_sum) noexcept;

}  // namespace hallubench::chem
