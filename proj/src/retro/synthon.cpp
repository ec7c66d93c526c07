#include "retrokit/retro/synthon.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "retrokit/chem/canon.hpp"
#include "retrokit/errors.hpp"

namespace retrokit::retro {
namespace {

using chem::Atom;
using chem::Bond;
using chem::Molecule;

int atom_with_map(const Molecule& mol, int map) {
  for (int i = 0; i < mol.num_atoms(); ++i) {
    if (mol.atom(i).map_number == map) return i;
  }
  return -1;
}

Synthon finish(Molecule fragment) {
  Synthon s;
  for (const auto& a : fragment.atoms()) {
    if (!a.is_wildcard() && a.map_number) s.maps.push_back(*a.map_number);
  }
  std::sort(s.maps.begin(), s.maps.end());
  s.smiles = chem::canonical_smiles(fragment);
  s.fragment = std::move(fragment);
  return s;
}

}  // namespace

std::pair<const Synthon&, const Synthon&> SynthonSplit::pair() const {
  if (ring_opened || synthons.size() != 2) throw RingBondError("ring bond cleavage gives a single synthon");
  return {synthons[0], synthons[1]};
}

SynthonSplit make_synthons(const Molecule& product, const Disconnection& d) {
  const int a = atom_with_map(product, d.map_a);
  const int b = atom_with_map(product, d.map_b);
  if (a < 0 || b < 0 || product.find_bond(a, b) < 0) {
    throw std::invalid_argument("bond " + std::to_string(d.map_a) + "-" + std::to_string(d.map_b) +
                                " is not in the product");
  }
  const int cut = product.find_bond(a, b);
  std::vector<Atom> atoms(product.atoms().begin(), product.atoms().end());
  std::vector<Bond> bonds;
  for (int i = 0; i < product.num_bonds(); ++i) {
    if (i != cut) bonds.push_back(product.bond(i));
  }
  const chem::BondOrder order = product.bond(cut).order;
  auto add_placeholder = [&](int attach, int partner_map) {
    Atom w;
    w.atomic_number = chem::kWildcard;
    w.isotope = partner_map;
    w.explicit_h = 0;
    atoms.push_back(w);
    bonds.push_back({attach, static_cast<int>(atoms.size()) - 1, order, chem::BondDirection::None});
  };
  add_placeholder(a, d.map_b);
  add_placeholder(b, d.map_a);
  const Molecule cut_graph(atoms, bonds);
  const auto comp = cut_graph.component_ids();

  SynthonSplit split;
  split.ring_opened = comp[static_cast<std::size_t>(a)] == comp[static_cast<std::size_t>(b)];
  std::vector<int> roots{a};
  if (!split.ring_opened) roots.push_back(b);
  for (int root : roots) {
    std::vector<int> members;
    for (int i = 0; i < cut_graph.num_atoms(); ++i) {
      if (comp[static_cast<std::size_t>(i)] == comp[static_cast<std::size_t>(root)]) members.push_back(i);
    }
    std::vector<int> frozen;
    for (int i : members) {
      if (product.num_atoms() > i && product.atom(i).is_bracket()) frozen.push_back(i);
    }
    split.synthons.push_back(finish(chem::induced_subgraph(cut_graph, members, frozen)));
  }
  return split;
}

Molecule join_synthons(const SynthonSplit& split) {
  std::vector<Molecule> parts;
  for (const auto& s : split.synthons) parts.push_back(s.fragment);
  const Molecule all = chem::combine(parts);
  std::vector<int> placeholders;
  for (int i = 0; i < all.num_atoms(); ++i) {
    if (all.atom(i).is_wildcard() && all.atom(i).isotope) placeholders.push_back(i);
  }
  if (placeholders.size() != 2) throw std::invalid_argument("expected exactly two placeholders");
  auto attach = [&](int w) {
    const auto nbrs = all.neighbors(w);
    return std::pair<int, int>{nbrs.front().atom, nbrs.front().bond};
  };
  const auto [ua, bond_a] = attach(placeholders[0]);
  const auto [ub, bond_b] = attach(placeholders[1]);
  (void)bond_b;
  std::vector<int> keep;
  for (int i = 0; i < all.num_atoms(); ++i) {
    if (i != placeholders[0] && i != placeholders[1]) keep.push_back(i);
  }
  std::map<int, int> index;
  std::vector<Atom> atoms;
  for (int i : keep) {
    index[i] = static_cast<int>(atoms.size());
    atoms.push_back(all.atom(i));
  }
  std::vector<Bond> bonds;
  for (const auto& b : all.bonds()) {
    if (index.count(b.a) && index.count(b.b)) bonds.push_back({index[b.a], index[b.b], b.order, b.direction});
  }
  bonds.push_back({index[ua], index[ub], all.bond(bond_a).order, chem::BondDirection::None});
  return Molecule(std::move(atoms), std::move(bonds));
}

EquivalentMapping map_equivalents(const chem::MappedReaction& mr, const std::vector<Synthon>& synthons) {
  EquivalentMapping out;
  for (const auto& s : synthons) {
    std::vector<int> candidates;
    for (int mi = 0; mi < static_cast<int>(mr.precursors().size()); ++mi) {
      const bool all = std::all_of(s.maps.begin(), s.maps.end(),
                                   [&](int m) { return mr.precursor_atom(m).molecule == mi; });
      if (all && !s.maps.empty()) candidates.push_back(mi);
    }
    if (candidates.size() != 1) {
      throw AmbiguityError("synthon " + s.smiles + " matches " + std::to_string(candidates.size()) + " precursors");
    }
    const auto& pre = mr.precursors()[static_cast<std::size_t>(candidates.front())];
    out.pairs.push_back({s, candidates.front(), chem::canonical_smiles(pre)});
  }
  return out;
}

}  // namespace retrokit::retro
