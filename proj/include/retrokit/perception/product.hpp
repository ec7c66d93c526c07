#pragma once

#include <string>
#include <vector>

#include "retrokit/chem/reaction.hpp"
#include "retrokit/perception/pattern.hpp"

namespace retrokit::perception {

struct FunctionalGroupHit {
  std::string name;
  /// Product map numbers in pattern-atom order.
  std::vector<int> matched_atom_maps;
  std::string fragment_smiles;
  bool operator==(const FunctionalGroupHit&) const = default;
};

struct ProductStats {
  int ring_count = 0;
  int carbon_count = 0;
  /// Count of `@`, `/` and `\` characters in the product text.
  int stereo_char_count = 0;
  bool operator==(const ProductStats&) const = default;
};

struct ProductInfo {
  std::string mapped_smiles;
  std::vector<FunctionalGroupHit> groups;
  ProductStats stats;
  bool operator==(const ProductInfo&) const = default;
};

ProductStats product_stats(const chem::Molecule& product);

/// Hits for every pattern in table order, matches in sorted order.
std::vector<FunctionalGroupHit> find_groups(const chem::Molecule& product, const std::vector<PatternDef>& patterns);

ProductInfo analyze_product(const chem::MappedReaction& mapped, const std::vector<PatternDef>& patterns);

}  // namespace retrokit::perception
