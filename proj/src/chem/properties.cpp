#include "hallubench/chem/properties.hpp"

#include "hallubench/chem/elements.hpp"

namespace hallubench::chem {

std::map<std::string, int> element_counts(const Molecule& m) {
  std::map<std::string, int> counts;
  for (const auto& atom : m.atoms()) ++counts[std::string(atom.symbol())];
  if (const int h = m.hydrogen_count(); h > 0) counts["H"] += h;
  return counts;
}

std::string molecular_formula(const Molecule& m) {
  auto counts = element_counts(m);
  std::string out;
  auto emit = [&out](const std::string& symbol, int count) {
    out += symbol;
    if (count > 1) out += std::to_string(count);
  };
  if (auto c = counts.find("C"); c != counts.end()) {
    emit("C", c->second);
    counts.erase(c);
    if (auto h = counts.find("H"); h != counts.end()) {
      emit("H", h->second);
      counts.erase(h);
    }
  }
  // std::map orders by byte value; symbols are capitalized so this is alphabetical.
  for (const auto& [symbol, count] : counts) emit(symbol, count);
  return out;
}

double molecular_weight(const Molecule& m) {
  constexpr double kHydrogen = 1.008;
  double total = 0.0;
  for (const auto& atom : m.atoms()) {
    total += atom.isotope ? isotope_mass(atom.atomic_number, *atom.isotope)
                          : standard_atomic_weight(atom.atomic_number);
  }
  return total + kHydrogen * m.hydrogen_count();
}

std::size_t heavy_atom_count(const Molecule& m) {
  std::size_t count = 0;
  for (const auto& atom : m.atoms()) count += atom.atomic_number != 1 ? 1 : 0;
  return count;
}

}  // namespace hallubench::chem
