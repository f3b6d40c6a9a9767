#include "hallubench/chem/elements.hpp"

#include <array>
#include <span>

namespace hallubench::chem {
namespace {

struct ElementInfo {
  std::string_view symbol;
  double weight;
};

// Index = atomic number. Weights to five significant figures.
constexpr std::array<ElementInfo, kMaxAtomicNumber + 1> kElements{{
    {"", 0.0},        {"H", 1.008},     {"He", 4.0026},   {"Li", 6.94},     {"Be", 9.0122},
    {"B", 10.81},     {"C", 12.011},    {"N", 14.007},    {"O", 15.999},    {"F", 18.998},
    {"Ne", 20.180},   {"Na", 22.990},   {"Mg", 24.305},   {"Al", 26.982},   {"Si", 28.085},
    {"P", 30.974},    {"S", 32.06},     {"Cl", 35.45},    {"Ar", 39.948},   {"K", 39.098},
    {"Ca", 40.078},   {"Sc", 44.956},   {"Ti", 47.867},   {"V", 50.942},    {"Cr", 51.996},
    {"Mn", 54.938},   {"Fe", 55.845},   {"Co", 58.933},   {"Ni", 58.693},   {"Cu", 63.546},
    {"Zn", 65.38},    {"Ga", 69.723},   {"Ge", 72.630},   {"As", 74.922},   {"Se", 78.971},
    {"Br", 79.904},   {"Kr", 83.798},   {"Rb", 85.468},   {"Sr", 87.62},    {"Y", 88.906},
    {"Zr", 91.224},   {"Nb", 92.906},   {"Mo", 95.95},    {"Tc", 98.0},     {"Ru", 101.07},
    {"Rh", 102.91},   {"Pd", 106.42},   {"Ag", 107.87},   {"Cd", 112.41},   {"In", 114.82},
    {"Sn", 118.71},   {"Sb", 121.76},   {"Te", 127.60},   {"I", 126.90},    {"Xe", 131.29},
    {"Cs", 132.91},   {"Ba", 137.33},   {"La", 138.91},   {"Ce", 140.12},   {"Pr", 140.91},
    {"Nd", 144.24},   {"Pm", 145.0},    {"Sm", 150.36},   {"Eu", 151.96},   {"Gd", 157.25},
    {"Tb", 158.93},   {"Dy", 162.50},   {"Ho", 164.93},   {"Er", 167.26},   {"Tm", 168.93},
    {"Yb", 173.05},   {"Lu", 174.97},   {"Hf", 178.49},   {"Ta", 180.95},   {"W", 183.84},
    {"Re", 186.21},   {"Os", 190.23},   {"Ir", 192.22},   {"Pt", 195.08},   {"Au", 196.97},
    {"Hg", 200.59},   {"Tl", 204.38},   {"Pb", 207.2},    {"Bi", 208.98},   {"Po", 209.0},
    {"At", 210.0},    {"Rn", 222.0},    {"Fr", 223.0},    {"Ra", 226.0},    {"Ac", 227.0},
    {"Th", 232.04},   {"Pa", 231.04},   {"U", 238.03},    {"Np", 237.0},    {"Pu", 244.0},
    {"Am", 243.0},    {"Cm", 247.0},    {"Bk", 247.0},    {"Cf", 251.0},    {"Es", 252.0},
    {"Fm", 257.0},    {"Md", 258.0},    {"No", 259.0},    {"Lr", 262.0},    {"Rf", 267.0},
    {"Db", 268.0},    {"Sg", 269.0},    {"Bh", 270.0},    {"Hs", 269.0},    {"Mt", 278.0},
    {"Ds", 281.0},    {"Rg", 282.0},    {"Cn", 285.0},    {"Nh", 286.0},    {"Fl", 289.0},
    {"Mc", 290.0},    {"Lv", 293.0},    {"Ts", 294.0},    {"Og", 294.0},
}};

struct IsotopeInfo {
  int atomic_number;
  int mass_number;
  double mass;
};

constexpr std::array<IsotopeInfo, 16> kIsotopes{{
    {1, 1, 1.0078},   {1, 2, 2.0141},   {1, 3, 3.0160},   {6, 12, 12.000},
    {6, 13, 13.003},  {6, 14, 14.003},  {7, 15, 15.000},  {8, 17, 16.999},
    {8, 18, 17.999},  {9, 18, 18.001},  {15, 32, 31.974}, {16, 35, 34.969},
    {17, 36, 35.968}, {35, 76, 75.924}, {53, 125, 124.90}, {53, 131, 130.91},
}};

}  // namespace

std::optional<int> atomic_number(std::string_view symbol) noexcept {
  if (symbol.empty()) return std::nullopt;
  for (int z = 1; z <= kMaxAtomicNumber; ++z) {
    if (kElements[z].symbol == symbol) return z;
  }
  return std::nullopt;
}

std::string_view element_symbol(int z) noexcept {
  if (z < 1 || z > kMaxAtomicNumber) return {};
  return kElements[z].symbol;
}

double standard_atomic_weight(int z) noexcept {
  if (z < 1 || z > kMaxAtomicNumber) return 0.0;
  return kElements[z].weight;
}

double isotope_mass(int z, int mass_number) noexcept {
  for (const auto& iso : kIsotopes) {
    if (iso.atomic_number == z && iso.mass_number == mass_number) return iso.mass;
  }
  return static_cast<double>(mass_number);
}

bool in_organic_subset(int z) noexcept {
  switch (z) {
    case 5: case 6: case 7: case 8: case 9: case 15: case 16: case 17: case 35: case 53:
      return true;
    default:
      return false;
  }
}

bool may_be_aromatic(int z) noexcept {
  switch (z) {
    case 5: case 6: case 7: case 8: case 15: case 16: case 33: case 34: case 52:
      return true;
    default:
      return false;
  }
}

std::optional<int> default_implicit_hydrogens(int z, bool aromatic, int bond_order_sum) noexcept {
  static constexpr std::array<int, 1> kOne{1}, kTwo{2}, kThree{3}, kFour{4};
  static constexpr std::array<int, 2> kPnictogen{3, 5};
  static constexpr std::array<int, 3> kSulfur{2, 4, 6};
  std::span<const int> valences;
  switch (z) {
    case 5: valences = kThree; break;
    case 6: valences = kFour; break;
    case 7: case 15: valences = kPnictogen; break;
    case 8: valences = kTwo; break;
    case 16: valences = kSulfur; break;
    case 9: case 17: case 35: case 53: valences = kOne; break;
    default: return std::nullopt;
  }
  if (aromatic) {
    // One valence unit goes to the delocalized system; only the lowest
    // valence is considered.
    const int h = valences.front() - (bond_order_sum + 1);
    return h > 0 ? h : 0;
  }
  for (int v : valences) {
    if (v >= bond_order_sum) return v - bond_order_sum;
  }
  return 0;
}

}  // namespace hallubench::chem
