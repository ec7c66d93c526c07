#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "retrokit/chem/molecule.hpp"

namespace retrokit::chem {

struct ReactionRecord {
  std::string id;
  std::vector<Molecule> precursors;
  Molecule product;
  std::string raw;
};

/// Parses `precursors>>product`. A middle reagent field (`a>b>c`) is folded
/// into the precursors. Empty `.` pieces on either side are ignored.
ReactionRecord parse_rxn(std::string_view text, std::string id = {});

/// Writes `p1.p2>>product` from the molecules' source texts.
std::string rxn_text(const ReactionRecord& rec);

/// Location of a mapped atom on the precursor side.
struct AtomRef {
  int molecule = -1;
  int atom = -1;
  bool operator==(const AtomRef&) const = default;
};

/// A reaction whose product atoms carry maps 1..n, each matched by exactly one
/// precursor atom. Precursor maps that do not occur in the product are removed.
class MappedReaction {
 public:
  const ReactionRecord& record() const { return base_; }
  const Molecule& product() const { return base_.product; }
  const std::vector<Molecule>& precursors() const { return base_.precursors; }
  int num_maps() const { return static_cast<int>(product_atom_.size()) - 1; }
  int product_atom(int map) const { return product_atom_.at(static_cast<std::size_t>(map)); }
  AtomRef precursor_atom(int map) const { return precursor_atom_.at(static_cast<std::size_t>(map)); }

 private:
  friend MappedReaction bind_atom_maps(const ReactionRecord& rec);
  ReactionRecord base_;
  std::vector<int> product_atom_;
  std::vector<AtomRef> precursor_atom_;
};

/// Throws MappingError on an unmapped product atom, duplicate or gapped product
/// maps, duplicate precursor maps, or a product map missing from the precursors.
MappedReaction bind_atom_maps(const ReactionRecord& rec);

}  // namespace retrokit::chem
