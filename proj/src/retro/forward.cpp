#include "retrokit/retro/forward.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "retrokit/chem/canon.hpp"
#include "retrokit/errors.hpp"

namespace retrokit::retro {
namespace {

using chem::Atom;
using chem::AtomRef;
using chem::Bond;
using chem::BondOrder;
using chem::Molecule;

using Signature = std::tuple<int, bool, int, std::vector<std::pair<int, int>>>;

Signature signature(const TemplateSide& side, int i, const chem::Adjacency& adj) {
  const auto& a = side.atoms[static_cast<std::size_t>(i)];
  std::vector<std::pair<int, int>> nbrs;
  for (const auto& nb : adj[static_cast<std::size_t>(i)]) {
    const int m = side.atoms[static_cast<std::size_t>(nb.atom)].map;
    if (m) nbrs.emplace_back(m, static_cast<int>(side.bonds[static_cast<std::size_t>(nb.bond)].order));
  }
  std::sort(nbrs.begin(), nbrs.end());
  return {a.atomic_number, a.aromatic, a.charge, nbrs};
}

int valence_sum(const Molecule& mol, int atom) {
  int s = 0;
  for (const auto& nb : mol.neighbors(atom)) s += chem::doubled_valence(mol.bond(nb.bond).order);
  return s;
}

struct Prepared {
  perception::Pattern pattern;
  std::vector<int> rhs_of_lhs;  // -1: lhs atom is deleted
  std::vector<int> lhs_of_rhs;  // -1: rhs atom is created
  bool valid = true;
};

Prepared prepare(const TemplateGraph& t) {
  Prepared p;
  p.pattern = t.lhs.as_pattern();
  const auto nl = t.lhs.atoms.size();
  const auto nr = t.rhs.atoms.size();
  p.rhs_of_lhs.assign(nl, -1);
  p.lhs_of_rhs.assign(nr, -1);
  std::map<int, int> rhs_by_map;
  for (int j = 0; j < static_cast<int>(nr); ++j) {
    const int m = t.rhs.atoms[static_cast<std::size_t>(j)].map;
    if (m) rhs_by_map[m] = j;
  }
  for (int i = 0; i < static_cast<int>(nl); ++i) {
    const int m = t.lhs.atoms[static_cast<std::size_t>(i)].map;
    if (!m) continue;
    auto it = rhs_by_map.find(m);
    if (it == rhs_by_map.end()) continue;
    p.rhs_of_lhs[static_cast<std::size_t>(i)] = it->second;
    p.lhs_of_rhs[static_cast<std::size_t>(it->second)] = i;
  }
  for (const auto& [m, j] : rhs_by_map) {
    if (p.lhs_of_rhs[static_cast<std::size_t>(j)] < 0) p.valid = false;
  }
  const auto ladj = t.lhs.adjacency();
  const auto radj = t.rhs.adjacency();
  for (int i = 0; i < static_cast<int>(nl); ++i) {
    if (t.lhs.atoms[static_cast<std::size_t>(i)].map) continue;
    const Signature sig = signature(t.lhs, i, ladj);
    for (int j = 0; j < static_cast<int>(nr); ++j) {
      if (t.rhs.atoms[static_cast<std::size_t>(j)].map || p.lhs_of_rhs[static_cast<std::size_t>(j)] >= 0) continue;
      if (signature(t.rhs, j, radj) == sig) {
        p.rhs_of_lhs[static_cast<std::size_t>(i)] = j;
        p.lhs_of_rhs[static_cast<std::size_t>(j)] = i;
        break;
      }
    }
  }
  return p;
}

std::optional<ForwardCandidate> apply_match(const TemplateGraph& t, const Prepared& prep, const Molecule& combined,
                                            const std::vector<AtomRef>& origin, const std::vector<int>& match) {
  const int n = combined.num_atoms();
  std::vector<int> lhs_at(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < static_cast<int>(match.size()); ++i) lhs_at[static_cast<std::size_t>(match[static_cast<std::size_t>(i)])] = i;

  auto removed_by_template = [&](int u, int v) {
    const int i = lhs_at[static_cast<std::size_t>(u)];
    const int j = lhs_at[static_cast<std::size_t>(v)];
    if (i < 0 || j < 0 || t.lhs.find_bond(i, j) < 0) return false;
    const int ri = prep.rhs_of_lhs[static_cast<std::size_t>(i)];
    const int rj = prep.rhs_of_lhs[static_cast<std::size_t>(j)];
    return ri < 0 || rj < 0 || t.rhs.find_bond(ri, rj) < 0;
  };

  std::vector<char> kept(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  for (int i = 0; i < static_cast<int>(match.size()); ++i) {
    if (prep.rhs_of_lhs[static_cast<std::size_t>(i)] >= 0) {
      kept[static_cast<std::size_t>(match[static_cast<std::size_t>(i)])] = 1;
      stack.push_back(match[static_cast<std::size_t>(i)]);
    }
  }
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& nb : combined.neighbors(u)) {
      const int v = nb.atom;
      if (kept[static_cast<std::size_t>(v)]) continue;
      const int lv = lhs_at[static_cast<std::size_t>(v)];
      if (lv >= 0 && prep.rhs_of_lhs[static_cast<std::size_t>(lv)] < 0) continue;
      if (removed_by_template(u, v)) continue;
      kept[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
    }
  }

  std::vector<int> new_index(static_cast<std::size_t>(n), -1);
  std::vector<Atom> atoms;
  ForwardCandidate cand;
  for (int u = 0; u < n; ++u) {
    if (!kept[static_cast<std::size_t>(u)]) continue;
    new_index[static_cast<std::size_t>(u)] = static_cast<int>(atoms.size());
    Atom a = combined.atom(u);
    a.map_number.reset();
    const int i = lhs_at[static_cast<std::size_t>(u)];
    if (i >= 0) {
      const auto& ra = t.rhs.atoms[static_cast<std::size_t>(prep.rhs_of_lhs[static_cast<std::size_t>(i)])];
      a.aromatic = ra.aromatic;
      a.formal_charge = ra.charge;
      if (a.is_bracket() && chem::in_organic_subset(a.atomic_number) &&
          combined.hydrogen_count(u) == combined.implicit_hydrogens(u)) {
        a.explicit_h.reset();
      }
    }
    atoms.push_back(a);
    cand.source.push_back(origin[static_cast<std::size_t>(u)]);
  }
  std::vector<int> rhs_index(t.rhs.atoms.size(), -1);
  for (int j = 0; j < static_cast<int>(t.rhs.atoms.size()); ++j) {
    const int i = prep.lhs_of_rhs[static_cast<std::size_t>(j)];
    if (i >= 0) {
      rhs_index[static_cast<std::size_t>(j)] = new_index[static_cast<std::size_t>(match[static_cast<std::size_t>(i)])];
      continue;
    }
    const auto& ra = t.rhs.atoms[static_cast<std::size_t>(j)];
    Atom a;
    a.atomic_number = ra.atomic_number;
    a.aromatic = ra.aromatic;
    a.formal_charge = ra.charge;
    if (!chem::in_organic_subset(a.atomic_number)) a.explicit_h = 0;
    rhs_index[static_cast<std::size_t>(j)] = static_cast<int>(atoms.size());
    atoms.push_back(a);
    cand.source.push_back(AtomRef{-1, -1});
  }

  std::vector<Bond> bonds;
  std::set<std::pair<int, int>> present;
  auto add_bond = [&](int a, int b, BondOrder order, chem::BondDirection dir) {
    const auto key = std::minmax(a, b);
    if (!present.insert(key).second) return;
    bonds.push_back({a, b, order, dir});
  };
  for (const auto& b : combined.bonds()) {
    const int na = new_index[static_cast<std::size_t>(b.a)];
    const int nb = new_index[static_cast<std::size_t>(b.b)];
    if (na < 0 || nb < 0) continue;
    const int i = lhs_at[static_cast<std::size_t>(b.a)];
    const int j = lhs_at[static_cast<std::size_t>(b.b)];
    if (i >= 0 && j >= 0) {
      const int ri = prep.rhs_of_lhs[static_cast<std::size_t>(i)];
      const int rj = prep.rhs_of_lhs[static_cast<std::size_t>(j)];
      const int rb = t.rhs.find_bond(ri, rj);
      if (t.lhs.find_bond(i, j) >= 0 || rb >= 0) {
        if (rb >= 0) add_bond(na, nb, t.rhs.bonds[static_cast<std::size_t>(rb)].order, chem::BondDirection::None);
        continue;
      }
    }
    add_bond(na, nb, b.order, b.direction);
  }
  for (const auto& rb : t.rhs.bonds) {
    add_bond(rhs_index[static_cast<std::size_t>(rb.a)], rhs_index[static_cast<std::size_t>(rb.b)], rb.order,
             chem::BondDirection::None);
  }

  // Bracket atoms whose hydrogens were not the valence-table default keep
  // them, shifted by the change in bonding.
  std::vector<int> before(atoms.size(), 0);
  for (int u = 0; u < n; ++u) {
    const int k = new_index[static_cast<std::size_t>(u)];
    if (k >= 0 && lhs_at[static_cast<std::size_t>(u)] >= 0) before[static_cast<std::size_t>(k)] = valence_sum(combined, u);
  }
  std::vector<int> after(atoms.size(), 0);
  for (const auto& b : bonds) {
    after[static_cast<std::size_t>(b.a)] += chem::doubled_valence(b.order);
    after[static_cast<std::size_t>(b.b)] += chem::doubled_valence(b.order);
  }
  for (int u = 0; u < n; ++u) {
    const int k = new_index[static_cast<std::size_t>(u)];
    if (k < 0 || lhs_at[static_cast<std::size_t>(u)] < 0) continue;
    Atom& a = atoms[static_cast<std::size_t>(k)];
    if (!a.explicit_h) continue;
    const int delta = (after[static_cast<std::size_t>(k)] - before[static_cast<std::size_t>(k)]) / 2;
    a.explicit_h = std::max(0, *a.explicit_h - delta);
  }

  try {
    cand.product = Molecule(std::move(atoms), std::move(bonds));
  } catch (const ValenceError&) {
    return std::nullopt;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  cand.canonical = chem::canonical_smiles(cand.product);
  return cand;
}

}  // namespace

std::vector<ForwardCandidate> apply_template_traced(const TemplateGraph& t, std::span<const Molecule> reactants,
                                                    std::size_t match_limit) {
  const Prepared prep = prepare(t);
  if (!prep.valid || t.lhs.atoms.empty()) return {};
  const Molecule combined = chem::combine(reactants);
  std::vector<AtomRef> origin;
  for (int mi = 0; mi < static_cast<int>(reactants.size()); ++mi) {
    for (int ai = 0; ai < reactants[static_cast<std::size_t>(mi)].num_atoms(); ++ai) origin.push_back({mi, ai});
  }
  std::map<std::string, ForwardCandidate> unique;
  for (const auto& match : perception::enumerate_matches(combined, prep.pattern, match_limit)) {
    auto cand = apply_match(t, prep, combined, origin, match);
    if (cand) unique.try_emplace(cand->canonical, std::move(*cand));
  }
  std::vector<ForwardCandidate> out;
  out.reserve(unique.size());
  for (auto& [key, cand] : unique) out.push_back(std::move(cand));
  return out;
}

std::vector<Molecule> apply_template_forward(const ReactionTemplate& t, std::span<const Molecule> reactants) {
  std::vector<Molecule> out;
  for (auto& c : apply_template_traced(t.graph, reactants)) out.push_back(std::move(c.product));
  return out;
}

std::vector<Molecule> apply_template_forward(std::string_view template_text, std::span<const Molecule> reactants) {
  std::vector<Molecule> out;
  for (auto& c : apply_template_traced(parse_template(template_text), reactants)) out.push_back(std::move(c.product));
  return out;
}

TemplateLibrary::TemplateLibrary(const std::vector<std::string>& canonical_forms) {
  for (const auto& f : canonical_forms) add(f);
}

void TemplateLibrary::add(const std::string& canonical_form) {
  if (std::find(forms_.begin(), forms_.end(), canonical_form) != forms_.end()) return;
  graphs_.push_back(parse_template(canonical_form));
  forms_.push_back(canonical_form);
}

std::vector<std::string> TemplateLibrary::predict(std::span<const Molecule> reactants) const {
  std::set<std::string> out;
  for (const auto& g : graphs_) {
    for (const auto& c : apply_template_traced(g, reactants)) out.insert(c.canonical);
  }
  return {out.begin(), out.end()};
}

std::optional<chem::MappedReaction> TemplateLibrary::map_reaction(std::span<const Molecule> reactants,
                                                                  const std::string& product_canonical) const {
  for (const auto& g : graphs_) {
    for (const auto& c : apply_template_traced(g, reactants)) {
      if (c.canonical != product_canonical) continue;
      if (std::any_of(c.source.begin(), c.source.end(), [](const AtomRef& r) { return r.molecule < 0; })) continue;
      chem::ReactionRecord rec;
      std::vector<std::vector<Atom>> pre_atoms;
      for (const auto& r : reactants) {
        std::vector<Atom> atoms(r.atoms().begin(), r.atoms().end());
        for (auto& a : atoms) a.map_number.reset();
        pre_atoms.push_back(std::move(atoms));
      }
      std::vector<Atom> prod_atoms(c.product.atoms().begin(), c.product.atoms().end());
      for (int k = 0; k < static_cast<int>(prod_atoms.size()); ++k) {
        prod_atoms[static_cast<std::size_t>(k)].map_number = k + 1;
        const AtomRef src = c.source[static_cast<std::size_t>(k)];
        pre_atoms[static_cast<std::size_t>(src.molecule)][static_cast<std::size_t>(src.atom)].map_number = k + 1;
      }
      for (std::size_t mi = 0; mi < reactants.size(); ++mi) {
        const auto& r = reactants[mi];
        rec.precursors.emplace_back(std::move(pre_atoms[mi]), std::vector<Bond>(r.bonds().begin(), r.bonds().end()),
                                    r.source_text());
      }
      rec.product = Molecule(std::move(prod_atoms),
                             std::vector<Bond>(c.product.bonds().begin(), c.product.bonds().end()));
      return chem::bind_atom_maps(rec);
    }
  }
  return std::nullopt;
}

}  // namespace retrokit::retro
