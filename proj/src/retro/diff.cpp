#include "retrokit/retro/diff.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace retrokit::retro {
namespace {

using chem::AtomRef;
using chem::BondOrder;
using chem::MappedReaction;
using MapPair = std::pair<int, int>;

MapPair ordered(int a, int b) { return a < b ? MapPair{a, b} : MapPair{b, a}; }

int map_of(const chem::Molecule& mol, int atom) { return mol.atom(atom).map_number.value_or(0); }

const chem::Molecule& precursor_of(const MappedReaction& mr, int map) {
  return mr.precursors()[static_cast<std::size_t>(mr.precursor_atom(map).molecule)];
}

bool is_pi(BondOrder o) { return o != BondOrder::Single; }

auto change_key(const BondChange& c) {
  return std::make_tuple(static_cast<int>(c.kind), c.map_a, c.map_b, c.leaving.molecule, c.leaving.atom);
}

}  // namespace

ReactionDiff diff_bonds(const MappedReaction& mr) {
  std::map<MapPair, BondOrder> before;
  std::vector<BondChange> leaving_breaks;
  for (int mi = 0; mi < static_cast<int>(mr.precursors().size()); ++mi) {
    const auto& mol = mr.precursors()[static_cast<std::size_t>(mi)];
    for (const auto& b : mol.bonds()) {
      const int ma = map_of(mol, b.a);
      const int mb = map_of(mol, b.b);
      if (ma && mb) {
        before[ordered(ma, mb)] = b.order;
      } else if (ma || mb) {
        BondChange c;
        c.kind = ChangeKind::Broken;
        c.map_a = ma ? ma : mb;
        c.leaving = AtomRef{mi, ma ? b.b : b.a};
        c.before = b.order;
        leaving_breaks.push_back(c);
      }
    }
  }
  std::map<MapPair, BondOrder> after;
  const auto& product = mr.product();
  for (const auto& b : product.bonds()) after[ordered(map_of(product, b.a), map_of(product, b.b))] = b.order;

  ReactionDiff diff;
  for (const auto& [pair, order] : after) {
    auto it = before.find(pair);
    if (it == before.end()) {
      diff.bond_changes.push_back({ChangeKind::Formed, pair.first, pair.second, {}, std::nullopt, order});
    } else if (it->second != order) {
      diff.bond_changes.push_back({ChangeKind::OrderChanged, pair.first, pair.second, {}, it->second, order});
    }
  }
  for (const auto& [pair, order] : before) {
    if (!after.count(pair)) {
      diff.bond_changes.push_back({ChangeKind::Broken, pair.first, pair.second, {}, order, std::nullopt});
    }
  }
  diff.bond_changes.insert(diff.bond_changes.end(), leaving_breaks.begin(), leaving_breaks.end());
  std::sort(diff.bond_changes.begin(), diff.bond_changes.end(),
            [](const BondChange& x, const BondChange& y) { return change_key(x) < change_key(y); });

  for (int m = 1; m <= mr.num_maps(); ++m) {
    const int pa = mr.product_atom(m);
    const AtomRef ref = mr.precursor_atom(m);
    const auto& pre = precursor_of(mr, m);
    AtomChange c;
    c.map = m;
    c.h_before = pre.hydrogen_count(ref.atom);
    c.h_after = product.hydrogen_count(pa);
    c.charge_before = pre.atom(ref.atom).formal_charge;
    c.charge_after = product.atom(pa).formal_charge;
    c.aromatic_before = pre.atom(ref.atom).aromatic;
    c.aromatic_after = product.atom(pa).aromatic;
    if (c.h_before != c.h_after || c.charge_before != c.charge_after || c.aromatic_before != c.aromatic_after) {
      diff.atom_changes.push_back(c);
    }
  }
  return diff;
}

std::vector<Disconnection> identify_disconnections(const MappedReaction& mr, const ReactionDiff& diff) {
  std::vector<Disconnection> out;
  for (const auto& c : diff.bond_changes) {
    if (c.kind == ChangeKind::Formed) out.push_back({c.map_a, c.map_b, *c.after});
  }
  (void)mr;
  std::sort(out.begin(), out.end(), [](const Disconnection& x, const Disconnection& y) {
    return std::tie(x.map_a, x.map_b) < std::tie(y.map_a, y.map_b);
  });
  return out;
}

std::vector<Disconnection> identify_disconnections(const MappedReaction& mr) {
  return identify_disconnections(mr, diff_bonds(mr));
}

TemplateCore template_core(const MappedReaction& mr, const ReactionDiff& diff) {
  std::set<int> changed;
  for (const auto& c : diff.bond_changes) {
    changed.insert(c.map_a);
    if (c.map_b) changed.insert(c.map_b);
  }
  for (const auto& c : diff.atom_changes) changed.insert(c.map);

  std::set<int> context;
  std::set<std::pair<int, int>> leaving;
  const auto& product = mr.product();
  for (int m : changed) {
    for (const auto& nb : product.neighbors(mr.product_atom(m))) {
      const int other = map_of(product, nb.atom);
      if (!changed.count(other) && is_pi(product.bond(nb.bond).order)) context.insert(other);
    }
    const AtomRef ref = mr.precursor_atom(m);
    const auto& pre = precursor_of(mr, m);
    for (const auto& nb : pre.neighbors(ref.atom)) {
      const int other = map_of(pre, nb.atom);
      if (other == 0) {
        leaving.insert({ref.molecule, nb.atom});
      } else if (!changed.count(other) && is_pi(pre.bond(nb.bond).order)) {
        context.insert(other);
      }
    }
  }
  TemplateCore core;
  core.changed.assign(changed.begin(), changed.end());
  core.context.assign(context.begin(), context.end());
  for (const auto& [mol, atom] : leaving) core.leaving.push_back({mol, atom});
  return core;
}

}  // namespace retrokit::retro
