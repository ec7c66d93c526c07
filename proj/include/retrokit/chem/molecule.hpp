#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "retrokit/chem/element.hpp"

namespace retrokit::chem {

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

/// Tetrahedral mark as written: `@` is CounterClockwise, `@@` Clockwise.
enum class Chirality : std::uint8_t { None, CounterClockwise, Clockwise };

/// `/` is Up, `\` is Down, read in the direction from Bond::a to Bond::b.
enum class BondDirection : std::uint8_t { None, Up, Down };

BondDirection flipped(BondDirection d);

struct Atom {
  int atomic_number = 6;
  bool aromatic = false;
  int formal_charge = 0;
  /// Set only for bracket atoms; absent means hydrogens come from the valence table.
  std::optional<int> explicit_h;
  std::optional<int> isotope;
  std::optional<int> map_number;
  Chirality chirality = Chirality::None;

  bool is_wildcard() const { return atomic_number == kWildcard; }
  bool is_bracket() const { return explicit_h.has_value(); }

  bool operator==(const Atom&) const = default;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;
  BondDirection direction = BondDirection::None;

  int other(int atom) const { return atom == a ? b : a; }
  bool operator==(const Bond&) const = default;
};

struct Neighbor {
  int atom;
  int bond;
};

/// Simple molecular graph. Immutable once built; all constructors validate.
class Molecule {
 public:
  Molecule() = default;

  /// Validates endpoints, rejects self-loops and duplicate bonds, and computes
  /// hydrogen counts. Throws ValenceError when an organic-subset atom exceeds
  /// its largest allowed valence.
  Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds, std::string source_text = {});

  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }
  const Atom& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }
  std::span<const Neighbor> neighbors(int i) const { return adjacency_[static_cast<std::size_t>(i)]; }
  const std::string& source_text() const { return source_text_; }

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  int degree(int i) const { return static_cast<int>(neighbors(i).size()); }

  /// Total attached hydrogens (bracket count, or implicit from the valence table).
  int hydrogen_count(int i) const { return hydrogens_[static_cast<std::size_t>(i)]; }
  /// Hydrogens the valence table would assign if atom i were written bare.
  int implicit_hydrogens(int i) const;

  /// Bond index between two atoms, or -1.
  int find_bond(int a, int b) const;

  /// Connected-component id per atom, numbered in order of first atom.
  std::vector<int> component_ids() const;
  int num_components() const;
  /// Cycle rank: bonds - atoms + components.
  int ring_count() const;

  bool has_maps() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::string source_text_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<int> hydrogens_;
};

/// Doubled bond-order contribution (single 2, aromatic 3, double 4, triple 6).
int doubled_valence(BondOrder order);

/// Returns a copy of `mol` with every map number removed.
Molecule strip_maps(const Molecule& mol);

/// Disjoint union, atoms renumbered by concatenation.
Molecule combine(std::span<const Molecule> parts);

/// Induced subgraph on `atoms` (in the given order). Hydrogen counts are
/// recomputed from the new neighbourhood, except for atoms listed in
/// `freeze_h`, which become bracket atoms carrying their old total count.
Molecule induced_subgraph(const Molecule& mol, std::span<const int> atoms,
                          std::span<const int> freeze_h = {});

}  // namespace retrokit::chem
