#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace retrokit::chem {

/// Atomic number 0 is the `*` wildcard.
inline constexpr int kWildcard = 0;

/// Symbol for an atomic number ("*" for 0). Empty for out-of-range values.
std::string_view element_symbol(int atomic_number);

/// Atomic number for a capitalised element symbol ("Cl", "Se"), or nullopt.
std::optional<int> element_from_symbol(std::string_view symbol);

/// True for B, C, N, O, P, S, F, Cl, Br, I: atoms that may appear without
/// brackets and get implicit hydrogens.
bool in_organic_subset(int atomic_number);

/// True for the elements that may be written lowercase (aromatic) in the
/// supported grammar: b, c, n, o, p, s.
bool aromatic_capable(int atomic_number);

/// Allowed valences for organic-subset atoms, ascending. Empty otherwise.
std::span<const int> default_valences(int atomic_number);

}  // namespace retrokit::chem
