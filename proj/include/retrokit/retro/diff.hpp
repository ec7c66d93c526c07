#pragma once

#include <optional>
#include <vector>

#include "retrokit/chem/reaction.hpp"

namespace retrokit::retro {

enum class ChangeKind { Formed, Broken, OrderChanged };

struct BondChange {
  ChangeKind kind = ChangeKind::Formed;
  /// Map numbers, map_a < map_b. map_b is 0 when the partner is an unmapped
  /// precursor atom (a leaving group), identified by `leaving`.
  int map_a = 0;
  int map_b = 0;
  chem::AtomRef leaving;
  std::optional<chem::BondOrder> before;
  std::optional<chem::BondOrder> after;
  bool operator==(const BondChange&) const = default;
};

/// Atom-level change of a mapped atom: hydrogen count, charge or aromaticity.
struct AtomChange {
  int map = 0;
  int h_before = 0;
  int h_after = 0;
  int charge_before = 0;
  int charge_after = 0;
  bool aromatic_before = false;
  bool aromatic_after = false;
  bool operator==(const AtomChange&) const = default;
};

struct ReactionDiff {
  std::vector<BondChange> bond_changes;
  std::vector<AtomChange> atom_changes;
  bool empty() const { return bond_changes.empty() && atom_changes.empty(); }
};

ReactionDiff diff_bonds(const chem::MappedReaction& mapped);

struct Disconnection {
  int map_a = 0;
  int map_b = 0;
  chem::BondOrder order = chem::BondOrder::Single;
  bool operator==(const Disconnection&) const = default;
};

/// One disconnection per formed bond, sorted by (min map, max map).
std::vector<Disconnection> identify_disconnections(const chem::MappedReaction& mapped);
std::vector<Disconnection> identify_disconnections(const chem::MappedReaction& mapped, const ReactionDiff& diff);

/// Atoms entering the reaction template. `changed` are mapped atoms touched
/// by a bond or atom change; `context` are unchanged mapped atoms joined to a
/// changed atom by a double, triple or aromatic bond; `leaving` are unmapped
/// precursor atoms bonded to a changed atom.
struct TemplateCore {
  std::vector<int> changed;
  std::vector<int> context;
  std::vector<chem::AtomRef> leaving;
};

TemplateCore template_core(const chem::MappedReaction& mapped, const ReactionDiff& diff);

}  // namespace retrokit::retro
