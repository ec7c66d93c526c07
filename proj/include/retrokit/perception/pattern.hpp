#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "retrokit/chem/molecule.hpp"

namespace retrokit::perception {

/// One pattern atom. A bare uppercase symbol means the aliphatic element with
/// zero charge; lowercase means aromatic; `*` matches anything. Inside
/// brackets, `#n` names an element by number in either aromaticity, an H count constrains the total hydrogen count and a charge is
/// matched exactly (absent charge in brackets still means zero).
struct PatternAtom {
  int atomic_number = 6;
  bool any = false;
  bool aromatic = false;
  /// `[#n]`: element n, aromatic or not.
  bool either_aromaticity = false;
  std::optional<int> charge = 0;
  std::optional<int> total_h;
  /// `:n` inside brackets; ignored by matching, used by reaction templates.
  std::optional<int> map_number;
};

enum class PatternBondKind { SingleOrAromatic, Single, Double, Triple, Aromatic };

struct PatternBond {
  int a = 0;
  int b = 0;
  PatternBondKind kind = PatternBondKind::SingleOrAromatic;
};

class Pattern {
 public:
  /// Throws PatternSyntaxError.
  static Pattern parse(std::string_view text);
  static Pattern from_parts(std::vector<PatternAtom> atoms, std::vector<PatternBond> bonds);

  const std::vector<PatternAtom>& atoms() const { return atoms_; }
  const std::vector<PatternBond>& bonds() const { return bonds_; }
  const std::string& text() const { return text_; }
  int num_atoms() const { return static_cast<int>(atoms_.size()); }

 private:
  std::vector<PatternAtom> atoms_;
  std::vector<PatternBond> bonds_;
  std::string text_;
};

struct PatternDef {
  std::string name;
  std::string pattern;
};

bool atom_matches(const PatternAtom& p, const chem::Molecule& mol, int atom);
bool bond_matches(PatternBondKind kind, chem::BondOrder order);

/// All matches as pattern-atom -> molecule-atom vectors. Matches covering the
/// same molecule atom set are reported once; results are sorted by that set.
std::vector<std::vector<int>> match_pattern(const chem::Molecule& mol, const Pattern& pattern);
std::vector<std::vector<int>> match_pattern(const chem::Molecule& mol, const PatternDef& def);

/// Every injective mapping, without deduplication, stopping after `limit`.
std::vector<std::vector<int>> enumerate_matches(const chem::Molecule& mol, const Pattern& pattern,
                                                std::size_t limit);

/// Reads `name<TAB>pattern` lines; blank lines and `#` comments are skipped.
/// Every pattern is parsed up front; errors name the offending line.
std::vector<PatternDef> read_pattern_table(std::istream& in);
std::vector<PatternDef> load_pattern_table(const std::string& path);

}  // namespace retrokit::perception
