#include "retrokit/retro/template.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "retrokit/chem/canon.hpp"
#include "retrokit/errors.hpp"

namespace retrokit::retro {
namespace {

using chem::BondOrder;

struct SideText {
  std::vector<std::string> fragments;
  std::vector<int> sizes;
  std::vector<int> roots;
};

SideText render_side(const TemplateSide& side, std::span<const int> rank, std::span<const int> maps) {
  SideText out;
  if (side.atoms.empty()) return out;
  const chem::Adjacency adj = side.adjacency();
  const chem::EmitPlan plan = chem::plan_emission(adj, rank);
  const std::string joined = chem::render_plan(
      plan,
      [&](int i) {
        TemplateAtom a = side.atoms[static_cast<std::size_t>(i)];
        a.map = maps[static_cast<std::size_t>(i)];
        return template_atom_text(a);
      },
      [&](int b, int, int) { return template_bond_text(side.bonds[static_cast<std::size_t>(b)].order); }, "\n");
  std::size_t start = 0;
  while (true) {
    const auto end = joined.find('\n', start);
    out.fragments.push_back(joined.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  std::vector<int> position(side.atoms.size());
  for (std::size_t i = 0; i < plan.order.size(); ++i) position[static_cast<std::size_t>(plan.order[i])] = static_cast<int>(i);
  for (std::size_t r = 0; r < plan.roots.size(); ++r) {
    const int begin = position[static_cast<std::size_t>(plan.roots[r])];
    const int end = r + 1 < plan.roots.size() ? position[static_cast<std::size_t>(plan.roots[r + 1])]
                                              : static_cast<int>(plan.order.size());
    out.sizes.push_back(end - begin);
    out.roots.push_back(plan.roots[r]);
  }
  return out;
}

std::vector<std::int64_t> atom_invariant(const TemplateSide& side, int i, chem::Adjacency const& adj) {
  const auto& a = side.atoms[static_cast<std::size_t>(i)];
  return {a.atomic_number, a.aromatic ? 1 : 0, a.charge, a.map ? 1 : 0,
          static_cast<std::int64_t>(adj[static_cast<std::size_t>(i)].size())};
}

/// Writes one side with its own maps, each fragment ranked on its own graph.
std::vector<std::pair<int, std::string>> instance_fragments(const TemplateSide& side) {
  chem::CanonGraph g;
  g.adj = side.adjacency();
  for (const auto& b : side.bonds) g.edge_label.push_back(static_cast<int>(b.order));
  for (int i = 0; i < static_cast<int>(side.atoms.size()); ++i) {
    auto inv = atom_invariant(side, i, g.adj);
    inv.push_back(side.atoms[static_cast<std::size_t>(i)].map);
    g.invariant.push_back(std::move(inv));
  }
  std::vector<int> maps;
  for (const auto& a : side.atoms) maps.push_back(a.map);
  const auto emit = [&](std::span<const int> rank) {
    const SideText t = render_side(side, rank, maps);
    std::string s;
    for (const auto& f : t.fragments) s += f + "\n";
    return s;
  };
  const auto best = chem::canonical_ranking(g, emit);
  const SideText t = render_side(side, best.rank, maps);
  std::vector<std::pair<int, std::string>> out;
  for (std::size_t k = 0; k < t.fragments.size(); ++k) out.emplace_back(t.roots[k], t.fragments[k]);
  return out;
}

std::string join_sorted(SideText t) {
  std::vector<std::size_t> idx(t.fragments.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return std::tie(t.sizes[x], t.fragments[x]) < std::tie(t.sizes[y], t.fragments[y]);
  });
  std::string out;
  for (std::size_t k : idx) {
    if (!out.empty()) out += '.';
    out += t.fragments[k];
  }
  return out;
}

std::vector<std::string_view> split_fragments(std::string_view side, std::size_t offset) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= side.size(); ++i) {
    if (i == side.size() || (side[i] == '.' && depth == 0)) {
      std::string_view piece = side.substr(start, i - start);
      if (piece.empty()) throw PatternSyntaxError(offset + start, "empty template fragment");
      if (piece.front() == '(') {
        int d = 0;
        std::size_t close = std::string_view::npos;
        for (std::size_t k = 0; k < piece.size(); ++k) {
          if (piece[k] == '(') ++d;
          if (piece[k] == ')' && --d == 0) {
            close = k;
            break;
          }
        }
        if (close != piece.size() - 1) throw PatternSyntaxError(offset + start, "unbalanced fragment parentheses");
        piece = piece.substr(1, piece.size() - 2);
      }
      out.push_back(piece);
      start = i + 1;
      continue;
    }
    if (side[i] == '(') ++depth;
    if (side[i] == ')') --depth;
  }
  return out;
}

TemplateSide parse_side(std::string_view text, std::size_t offset) {
  TemplateSide side;
  for (auto piece : split_fragments(text, offset)) {
    const perception::Pattern p = perception::Pattern::parse(piece);
    const int base = static_cast<int>(side.atoms.size());
    for (const auto& pa : p.atoms()) {
      TemplateAtom a;
      a.atomic_number = pa.any ? chem::kWildcard : pa.atomic_number;
      a.aromatic = pa.aromatic;
      a.charge = pa.charge.value_or(0);
      a.map = pa.map_number.value_or(0);
      side.atoms.push_back(a);
    }
    for (const auto& pb : p.bonds()) {
      TemplateBond b{base + pb.a, base + pb.b, BondOrder::Single};
      switch (pb.kind) {
        case perception::PatternBondKind::Single: b.order = BondOrder::Single; break;
        case perception::PatternBondKind::Double: b.order = BondOrder::Double; break;
        case perception::PatternBondKind::Triple: b.order = BondOrder::Triple; break;
        case perception::PatternBondKind::Aromatic: b.order = BondOrder::Aromatic; break;
        case perception::PatternBondKind::SingleOrAromatic:
          b.order = p.atoms()[static_cast<std::size_t>(pb.a)].aromatic && p.atoms()[static_cast<std::size_t>(pb.b)].aromatic
                        ? BondOrder::Aromatic
                        : BondOrder::Single;
          break;
      }
      side.bonds.push_back(b);
    }
  }
  return side;
}

}  // namespace

chem::Adjacency TemplateSide::adjacency() const {
  chem::Adjacency adj(atoms.size());
  for (int b = 0; b < static_cast<int>(bonds.size()); ++b) {
    const auto& bd = bonds[static_cast<std::size_t>(b)];
    adj[static_cast<std::size_t>(bd.a)].push_back({bd.b, b});
    adj[static_cast<std::size_t>(bd.b)].push_back({bd.a, b});
  }
  return adj;
}

std::vector<std::vector<int>> TemplateSide::fragments() const {
  const auto adj = adjacency();
  std::vector<int> comp(atoms.size(), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < static_cast<int>(atoms.size()); ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{s};
    comp[static_cast<std::size_t>(s)] = id;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      out.back().push_back(u);
      for (const auto& nb : adj[static_cast<std::size_t>(u)]) {
        if (comp[static_cast<std::size_t>(nb.atom)] < 0) {
          comp[static_cast<std::size_t>(nb.atom)] = id;
          stack.push_back(nb.atom);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

int TemplateSide::find_bond(int a, int b) const {
  for (int i = 0; i < static_cast<int>(bonds.size()); ++i) {
    const auto& bd = bonds[static_cast<std::size_t>(i)];
    if ((bd.a == a && bd.b == b) || (bd.a == b && bd.b == a)) return i;
  }
  return -1;
}

perception::Pattern TemplateSide::as_pattern() const {
  std::vector<perception::PatternAtom> patoms;
  for (const auto& a : atoms) {
    perception::PatternAtom p;
    p.any = a.atomic_number == chem::kWildcard;
    p.atomic_number = a.atomic_number;
    p.aromatic = a.aromatic;
    if (p.any) {
      p.charge.reset();
    } else {
      p.charge = a.charge;
    }
    if (a.map) p.map_number = a.map;
    patoms.push_back(p);
  }
  std::vector<perception::PatternBond> pbonds;
  for (const auto& b : bonds) {
    perception::PatternBondKind kind = perception::PatternBondKind::Single;
    switch (b.order) {
      case BondOrder::Single: kind = perception::PatternBondKind::Single; break;
      case BondOrder::Double: kind = perception::PatternBondKind::Double; break;
      case BondOrder::Triple: kind = perception::PatternBondKind::Triple; break;
      case BondOrder::Aromatic: kind = perception::PatternBondKind::Aromatic; break;
    }
    pbonds.push_back({b.a, b.b, kind});
  }
  return perception::Pattern::from_parts(std::move(patoms), std::move(pbonds));
}

std::string template_atom_text(const TemplateAtom& a) {
  std::string sym = a.atomic_number == chem::kWildcard ? "*" : std::string(chem::element_symbol(a.atomic_number));
  if (a.aromatic) {
    for (auto& ch : sym) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  std::string charge;
  if (a.charge != 0) {
    charge = a.charge > 0 ? "+" : "-";
    if (std::abs(a.charge) > 1) charge += std::to_string(std::abs(a.charge));
  }
  if (a.map == 0 && a.charge == 0 && (a.atomic_number == chem::kWildcard || chem::in_organic_subset(a.atomic_number))) {
    return sym;
  }
  std::string out = "[" + sym + charge;
  if (a.map) out += ":" + std::to_string(a.map);
  return out + "]";
}

std::string template_bond_text(BondOrder order) {
  switch (order) {
    case BondOrder::Single: return "-";
    case BondOrder::Double: return "=";
    case BondOrder::Triple: return "#";
    case BondOrder::Aromatic: return ":";
  }
  return "-";
}

ReactionTemplate extract_template(const chem::MappedReaction& mr) { return extract_template(mr, diff_bonds(mr)); }

ReactionTemplate extract_template(const chem::MappedReaction& mr, const ReactionDiff& diff) {
  if (diff.empty()) throw NoChangeError("reaction " + mr.record().id + " has no bond or atom changes");
  const TemplateCore core = template_core(mr, diff);
  std::map<int, bool> keep_map;  // map -> written with its map number
  for (int m : core.changed) keep_map[m] = true;
  for (int m : core.context) keep_map[m] = false;

  ReactionTemplate t;
  std::vector<int> lhs_precursor;  // precursor index per lhs atom
  for (int mi = 0; mi < static_cast<int>(mr.precursors().size()); ++mi) {
    const auto& mol = mr.precursors()[static_cast<std::size_t>(mi)];
    std::vector<int> chosen;
    for (int ai = 0; ai < mol.num_atoms(); ++ai) {
      const int m = mol.atom(ai).map_number.value_or(0);
      const bool leaving = std::find(core.leaving.begin(), core.leaving.end(), chem::AtomRef{mi, ai}) != core.leaving.end();
      if ((m && keep_map.count(m)) || leaving) chosen.push_back(ai);
    }
    std::map<int, int> local;
    for (int ai : chosen) {
      const auto& src = mol.atom(ai);
      const int m = src.map_number.value_or(0);
      local[ai] = static_cast<int>(t.graph.lhs.atoms.size());
      t.graph.lhs.atoms.push_back({src.atomic_number, src.aromatic, src.formal_charge, (m && keep_map[m]) ? m : 0});
      lhs_precursor.push_back(mi);
    }
    for (const auto& b : mol.bonds()) {
      if (local.count(b.a) && local.count(b.b)) t.graph.lhs.bonds.push_back({local[b.a], local[b.b], b.order});
    }
  }
  const auto& product = mr.product();
  std::map<int, int> local;
  for (int ai = 0; ai < product.num_atoms(); ++ai) {
    const int m = product.atom(ai).map_number.value_or(0);
    if (!keep_map.count(m)) continue;
    const auto& src = product.atom(ai);
    local[ai] = static_cast<int>(t.graph.rhs.atoms.size());
    t.graph.rhs.atoms.push_back({src.atomic_number, src.aromatic, src.formal_charge, keep_map[m] ? m : 0});
  }
  for (const auto& b : product.bonds()) {
    if (local.count(b.a) && local.count(b.b)) t.graph.rhs.bonds.push_back({local[b.a], local[b.b], b.order});
  }

  auto lhs = instance_fragments(t.graph.lhs);
  std::stable_sort(lhs.begin(), lhs.end(), [&](const auto& x, const auto& y) {
    return std::tie(lhs_precursor[static_cast<std::size_t>(x.first)], x.second) <
           std::tie(lhs_precursor[static_cast<std::size_t>(y.first)], y.second);
  });
  auto rhs = instance_fragments(t.graph.rhs);
  std::stable_sort(rhs.begin(), rhs.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
  auto wrap = [](const std::vector<std::pair<int, std::string>>& frags, std::vector<std::string>& dest) {
    std::string s;
    for (const auto& [root, text] : frags) {
      (void)root;
      dest.push_back(text);
      if (!s.empty()) s += '.';
      s += "(" + text + ")";
    }
    return s;
  };
  t.instance_form = wrap(lhs, t.lhs_fragments) + ">>" + wrap(rhs, t.rhs_fragments);
  t.canonical_form = canonicalize_template(t.graph);
  return t;
}

TemplateGraph parse_template(std::string_view text) {
  const auto sep = text.find(">>");
  if (sep == std::string_view::npos) throw PatternSyntaxError(text.size(), "missing '>>' in template");
  if (text.find('>', sep + 2) != std::string_view::npos) {
    throw PatternSyntaxError(text.find('>', sep + 2), "unexpected '>' in template");
  }
  TemplateGraph g;
  g.lhs = parse_side(text.substr(0, sep), 0);
  g.rhs = parse_side(text.substr(sep + 2), sep + 2);
  return g;
}

std::string canonicalize_template(const TemplateGraph& graph) {
  const auto& lhs = graph.lhs;
  const auto& rhs = graph.rhs;
  const int nl = static_cast<int>(lhs.atoms.size());
  const int nr = static_cast<int>(rhs.atoms.size());
  chem::CanonGraph g;
  g.adj.resize(static_cast<std::size_t>(nl + nr));
  auto add_edge = [&](int a, int b, int label) {
    const int id = static_cast<int>(g.edge_label.size());
    g.edge_label.push_back(label);
    g.adj[static_cast<std::size_t>(a)].push_back({b, id});
    g.adj[static_cast<std::size_t>(b)].push_back({a, id});
  };
  for (const auto& b : lhs.bonds) add_edge(b.a, b.b, static_cast<int>(b.order));
  for (const auto& b : rhs.bonds) add_edge(nl + b.a, nl + b.b, static_cast<int>(b.order));
  constexpr int kMapEdge = 8;
  for (int i = 0; i < nl; ++i) {
    const int m = lhs.atoms[static_cast<std::size_t>(i)].map;
    if (!m) continue;
    for (int j = 0; j < nr; ++j) {
      if (rhs.atoms[static_cast<std::size_t>(j)].map == m) add_edge(i, nl + j, kMapEdge);
    }
  }
  const auto ladj = lhs.adjacency();
  const auto radj = rhs.adjacency();
  for (int i = 0; i < nl; ++i) {
    auto inv = atom_invariant(lhs, i, ladj);
    inv.insert(inv.begin(), 0);
    g.invariant.push_back(std::move(inv));
  }
  for (int j = 0; j < nr; ++j) {
    auto inv = atom_invariant(rhs, j, radj);
    inv.insert(inv.begin(), 1);
    g.invariant.push_back(std::move(inv));
  }

  const auto emit = [&](std::span<const int> rank) {
    const auto lrank = rank.subspan(0, static_cast<std::size_t>(nl));
    const auto rrank = rank.subspan(static_cast<std::size_t>(nl));
    std::vector<int> rmaps(static_cast<std::size_t>(nr), 0);
    std::map<int, int> renumber;  // old map -> new map
    int next = 1;
    if (nr > 0) {
      const chem::EmitPlan plan = chem::plan_emission(radj, rrank);
      for (int j : plan.order) {
        const int m = rhs.atoms[static_cast<std::size_t>(j)].map;
        if (m && !renumber.count(m)) renumber[m] = next++;
      }
    }
    for (int j = 0; j < nr; ++j) {
      const int m = rhs.atoms[static_cast<std::size_t>(j)].map;
      if (m) rmaps[static_cast<std::size_t>(j)] = renumber[m];
    }
    std::vector<int> lmaps(static_cast<std::size_t>(nl), 0);
    if (nl > 0) {
      const chem::EmitPlan plan = chem::plan_emission(ladj, lrank);
      for (int i : plan.order) {
        const int m = lhs.atoms[static_cast<std::size_t>(i)].map;
        if (m && !renumber.count(m)) renumber[m] = next++;
      }
    }
    for (int i = 0; i < nl; ++i) {
      const int m = lhs.atoms[static_cast<std::size_t>(i)].map;
      if (m) lmaps[static_cast<std::size_t>(i)] = renumber[m];
    }
    return join_sorted(render_side(lhs, lrank, lmaps)) + ">>" + join_sorted(render_side(rhs, rrank, rmaps));
  };
  return chem::canonical_ranking(g, emit).text;
}

std::string canonicalize_template(const ReactionTemplate& t) { return canonicalize_template(t.graph); }

std::string canonicalize_template(std::string_view text) { return canonicalize_template(parse_template(text)); }

}  // namespace retrokit::retro
