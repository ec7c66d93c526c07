#include "retrokit/chem/element.hpp"

#include <array>

namespace retrokit::chem {
namespace {

constexpr std::array<std::string_view, 119> kSymbols = {
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
    "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
    "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
    "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
    "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
    "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
    "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
    "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
    "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

constexpr std::array<int, 1> kB = {3};
constexpr std::array<int, 1> kC = {4};
constexpr std::array<int, 1> kN = {3};
constexpr std::array<int, 1> kO = {2};
constexpr std::array<int, 2> kP = {3, 5};
constexpr std::array<int, 3> kS = {2, 4, 6};
constexpr std::array<int, 1> kHalogen = {1};

}  // namespace

std::string_view element_symbol(int atomic_number) {
  if (atomic_number < 0 || atomic_number >= static_cast<int>(kSymbols.size())) return {};
  return kSymbols[static_cast<std::size_t>(atomic_number)];
}

std::optional<int> element_from_symbol(std::string_view symbol) {
  for (std::size_t i = 1; i < kSymbols.size(); ++i) {
    if (kSymbols[i] == symbol) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool in_organic_subset(int z) {
  switch (z) {
    case 5: case 6: case 7: case 8: case 15: case 16: case 9: case 17: case 35: case 53:
      return true;
    default:
      return false;
  }
}

bool aromatic_capable(int z) {
  return z == 5 || z == 6 || z == 7 || z == 8 || z == 15 || z == 16;
}

std::span<const int> default_valences(int z) {
  switch (z) {
    case 5: return kB;
    case 6: return kC;
    case 7: return kN;
    case 8: return kO;
    case 15: return kP;
    case 16: return kS;
    case 9: case 17: case 35: case 53: return kHalogen;
    default: return {};
  }
}

}  // namespace retrokit::chem
