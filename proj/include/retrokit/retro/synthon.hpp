#pragma once

#include <string>
#include <vector>

#include "retrokit/chem/reaction.hpp"
#include "retrokit/retro/diff.hpp"

namespace retrokit::retro {

/// Fragment left by a disconnection. The cut site carries a `*` atom whose
/// isotope label is the partner atom's map number, so it is written `[n*]`.
/// Other atoms keep their product map numbers.
struct Synthon {
  chem::Molecule fragment;
  /// Canonical SMILES with product maps removed, e.g. `[6*]C(C)=O`.
  std::string smiles;
  /// Product map numbers of the fragment's real atoms, ascending.
  std::vector<int> maps;
};

struct SynthonSplit {
  std::vector<Synthon> synthons;
  /// True when the cut bond was in a ring: one synthon with two placeholders.
  bool ring_opened = false;
  /// The two synthons of an acyclic cut; throws RingBondError after a ring opening.
  std::pair<const Synthon&, const Synthon&> pair() const;
};

/// Throws std::invalid_argument when the disconnection's bond is not in the product.
SynthonSplit make_synthons(const chem::Molecule& product, const Disconnection& d);

/// Reattaches the placeholders of a split, returning the mapped product graph.
chem::Molecule join_synthons(const SynthonSplit& split);

struct EquivalentPair {
  Synthon synthon;
  int precursor = -1;
  /// Canonical SMILES of the precursor, maps removed.
  std::string smiles;
};

struct EquivalentMapping {
  std::vector<EquivalentPair> pairs;
};

/// Pairs each synthon with the one precursor holding all of its mapped atoms.
/// Throws AmbiguityError when none or several qualify.
EquivalentMapping map_equivalents(const chem::MappedReaction& mapped, const std::vector<Synthon>& synthons);

}  // namespace retrokit::retro
