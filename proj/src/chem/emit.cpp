#include "retrokit/chem/emit.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace retrokit::chem {

Adjacency adjacency_of(const Molecule& mol) {
  Adjacency adj(static_cast<std::size_t>(mol.num_atoms()));
  for (int i = 0; i < mol.num_atoms(); ++i) {
    auto nbrs = mol.neighbors(i);
    adj[static_cast<std::size_t>(i)].assign(nbrs.begin(), nbrs.end());
  }
  return adj;
}

EmitPlan plan_emission(const Adjacency& adj, std::span<const int> rank) {
  const std::size_t n = adj.size();
  EmitPlan plan;
  plan.children.resize(n);
  plan.ring_opens.resize(n);
  plan.ring_closes.resize(n);

  std::vector<char> visited(n, 0);
  std::set<int> used_bonds;

  auto by_rank = [&](const Neighbor& x, const Neighbor& y) {
    return rank[static_cast<std::size_t>(x.atom)] < rank[static_cast<std::size_t>(y.atom)];
  };

  // Explicit stack keeps deep chains from exhausting the call stack.
  struct Frame {
    int atom;
    int parent_bond;
    std::vector<Neighbor> nbrs;
    std::size_t next;
  };

  std::vector<int> atoms_by_rank(n);
  std::iota(atoms_by_rank.begin(), atoms_by_rank.end(), 0);
  std::stable_sort(atoms_by_rank.begin(), atoms_by_rank.end(), [&](int x, int y) {
    return rank[static_cast<std::size_t>(x)] < rank[static_cast<std::size_t>(y)];
  });

  for (int root : atoms_by_rank) {
    if (visited[static_cast<std::size_t>(root)]) continue;
    plan.roots.push_back(root);
    std::vector<Frame> stack;
    auto enter = [&](int atom, int parent_bond) {
      visited[static_cast<std::size_t>(atom)] = 1;
      plan.order.push_back(atom);
      Frame f{atom, parent_bond, adj[static_cast<std::size_t>(atom)], 0};
      std::stable_sort(f.nbrs.begin(), f.nbrs.end(), by_rank);
      stack.push_back(std::move(f));
    };
    enter(root, -1);
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == f.nbrs.size()) {
        stack.pop_back();
        continue;
      }
      const Neighbor nb = f.nbrs[f.next++];
      if (nb.bond == f.parent_bond || used_bonds.count(nb.bond)) continue;
      used_bonds.insert(nb.bond);
      if (visited[static_cast<std::size_t>(nb.atom)]) {
        plan.ring_opens[static_cast<std::size_t>(nb.atom)].push_back({f.atom, nb.bond});
        plan.ring_closes[static_cast<std::size_t>(f.atom)].push_back({nb.atom, nb.bond});
      } else {
        plan.children[static_cast<std::size_t>(f.atom)].push_back(nb);
        enter(nb.atom, nb.bond);
      }
    }
  }
  return plan;
}

namespace {

std::string ring_label(int digit) {
  if (digit < 10) return std::to_string(digit);
  return "%" + std::to_string(digit);
}

}  // namespace

std::string render_plan(const EmitPlan& plan, const AtomTextFn& atom_text,
                        const BondTextFn& bond_text, std::string_view separator) {
  const std::size_t n = plan.children.size();
  std::vector<int> position(n, -1);
  for (std::size_t i = 0; i < plan.order.size(); ++i) {
    position[static_cast<std::size_t>(plan.order[i])] = static_cast<int>(i);
  }
  std::set<int> free_digits;
  int next_digit = 1;
  auto take_digit = [&]() {
    if (!free_digits.empty()) {
      const int d = *free_digits.begin();
      free_digits.erase(free_digits.begin());
      return d;
    }
    return next_digit++;
  };
  std::vector<std::pair<int, int>> bond_digit;  // (bond, digit)
  auto digit_for = [&](int bond) {
    for (const auto& [b, d] : bond_digit) {
      if (b == bond) return d;
    }
    return -1;
  };

  std::string out;
  auto by_position = [&](const Neighbor& x, const Neighbor& y) {
    return position[static_cast<std::size_t>(x.atom)] < position[static_cast<std::size_t>(y.atom)];
  };

  // Iterative rendering: each work item is either an atom to emit or a literal.
  struct Item {
    int atom;           // -1 for literal
    std::string text;   // literal text (or bond prefix when atom >= 0)
  };

  for (std::size_t r = 0; r < plan.roots.size(); ++r) {
    if (r > 0) out += separator;
    std::vector<Item> work;
    work.push_back({plan.roots[r], {}});
    while (!work.empty()) {
      Item item = std::move(work.back());
      work.pop_back();
      if (item.atom < 0) {
        out += item.text;
        continue;
      }
      const int u = item.atom;
      out += item.text;
      out += atom_text(u);

      auto closes = plan.ring_closes[static_cast<std::size_t>(u)];
      std::stable_sort(closes.begin(), closes.end(), by_position);
      std::vector<int> released;
      for (const auto& c : closes) {
        const int d = digit_for(c.bond);
        out += ring_label(d);
        released.push_back(d);
      }
      auto opens = plan.ring_opens[static_cast<std::size_t>(u)];
      std::stable_sort(opens.begin(), opens.end(), by_position);
      for (const auto& o : opens) {
        const int d = take_digit();
        bond_digit.emplace_back(o.bond, d);
        out += bond_text(o.bond, u, o.atom);
        out += ring_label(d);
      }
      for (int d : released) free_digits.insert(d);

      const auto& kids = plan.children[static_cast<std::size_t>(u)];
      // Push in reverse so the first child is rendered first.
      for (std::size_t k = kids.size(); k-- > 0;) {
        const Neighbor& child = kids[k];
        const bool is_branch = k + 1 < kids.size();
        if (is_branch) work.push_back({-1, ")"});
        work.push_back({child.atom, (is_branch ? "(" : "") + bond_text(child.bond, u, child.atom)});
      }
    }
  }
  return out;
}

}  // namespace retrokit::chem
