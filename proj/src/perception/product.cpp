#include "retrokit/perception/product.hpp"

#include <algorithm>

#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/smiles.hpp"

namespace retrokit::perception {

ProductStats product_stats(const chem::Molecule& product) {
  ProductStats s;
  s.ring_count = product.ring_count();
  for (const auto& a : product.atoms()) {
    if (a.atomic_number == 6) ++s.carbon_count;
  }
  const std::string& text = product.source_text();
  s.stereo_char_count = static_cast<int>(std::count_if(text.begin(), text.end(), [](char c) {
    return c == '@' || c == '/' || c == '\\';
  }));
  return s;
}

std::vector<FunctionalGroupHit> find_groups(const chem::Molecule& product, const std::vector<PatternDef>& patterns) {
  std::vector<FunctionalGroupHit> hits;
  for (const auto& def : patterns) {
    const Pattern pat = Pattern::parse(def.pattern);
    for (const auto& match : match_pattern(product, pat)) {
      FunctionalGroupHit hit;
      hit.name = def.name;
      for (int atom : match) hit.matched_atom_maps.push_back(product.atom(atom).map_number.value_or(0));
      const chem::Molecule fragment = chem::induced_subgraph(product, match, match);
      hit.fragment_smiles = chem::canonical_smiles(fragment);
      hits.push_back(std::move(hit));
    }
  }
  return hits;
}

ProductInfo analyze_product(const chem::MappedReaction& mapped, const std::vector<PatternDef>& patterns) {
  ProductInfo info;
  info.mapped_smiles = chem::write_smiles(mapped.product(), false);
  info.groups = find_groups(mapped.product(), patterns);
  info.stats = product_stats(mapped.product());
  return info;
}

}  // namespace retrokit::perception
