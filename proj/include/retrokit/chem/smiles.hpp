#pragma once

#include <string>
#include <string_view>

#include "retrokit/chem/molecule.hpp"

namespace retrokit::chem {

/// Parses the supported SMILES subset: organic-subset and bracket atoms, `*`,
/// branches, ring closures (digits and %nn), bond symbols `- = # : / \` and
/// `.`-separated components. Throws SyntaxError or ValenceError.
Molecule parse_smiles(std::string_view text);

/// Writes `mol`. With canonical=false atoms are emitted in input order and map
/// numbers are kept; with canonical=true the output depends only on the graph
/// (maps stripped) and is stable under re-parsing.
std::string write_smiles(const Molecule& mol, bool canonical);

/// Text for one atom in SMILES style, bracketed only when required.
std::string smiles_atom_text(const Molecule& mol, int atom, bool write_map);

/// Bond symbol in SMILES style for a bond written from `from` to `to`.
std::string smiles_bond_text(const Molecule& mol, int bond, int from, int to);

}  // namespace retrokit::chem
