#include "retrokit/chem/canon.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "retrokit/chem/smiles.hpp"
#include "retrokit/errors.hpp"

namespace retrokit::chem {
namespace {

template <class Key>
std::vector<int> dense_ranks(const std::vector<Key>& keys) {
  const std::size_t n = keys.size();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
  });
  std::vector<int> rank(n, 0);
  int r = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && keys[static_cast<std::size_t>(idx[k - 1])] < keys[static_cast<std::size_t>(idx[k])]) ++r;
    rank[static_cast<std::size_t>(idx[k])] = r;
  }
  return rank;
}

int count_classes(const std::vector<int>& rank) {
  return rank.empty() ? 0 : *std::max_element(rank.begin(), rank.end()) + 1;
}

bool are_twins(const CanonGraph& g, int u, int v) {
  auto key = [&](int x, int skip) {
    std::vector<std::pair<int, int>> k;
    for (const auto& nb : g.adj[static_cast<std::size_t>(x)]) {
      if (nb.atom == skip) continue;
      k.emplace_back(nb.atom, g.edge_label[static_cast<std::size_t>(nb.bond)]);
    }
    std::sort(k.begin(), k.end());
    return k;
  };
  // Twins also need the same label on a u-v edge, which holds trivially.
  return key(u, v) == key(v, u);
}

struct Search {
  const CanonGraph& graph;
  const RankEmitter& emit;
  std::size_t max_leaves;
  CanonResult best;
  bool have_best = false;

  void run(std::vector<int> rank) {
    if (best.leaves >= max_leaves) {
      best.truncated = true;
      return;
    }
    rank = refine_ranks(graph, std::move(rank));
    const int classes = count_classes(rank);
    if (classes == static_cast<int>(rank.size())) {
      ++best.leaves;
      std::string text = emit(rank);
      if (!have_best || text < best.text) {
        best.text = std::move(text);
        best.rank = rank;
        have_best = true;
      }
      return;
    }
    std::vector<int> size(static_cast<std::size_t>(classes), 0);
    for (int r : rank) ++size[static_cast<std::size_t>(r)];
    int target = 0;
    while (size[static_cast<std::size_t>(target)] < 2) ++target;
    std::vector<int> members;
    for (int i = 0; i < static_cast<int>(rank.size()); ++i) {
      if (rank[static_cast<std::size_t>(i)] == target) members.push_back(i);
    }
    bool all_twins = true;
    for (std::size_t k = 1; k < members.size() && all_twins; ++k) {
      all_twins = are_twins(graph, members[0], members[k]);
    }
    if (all_twins) members.resize(1);
    for (int chosen : members) {
      std::vector<int> next(rank.size());
      for (std::size_t i = 0; i < rank.size(); ++i) {
        next[i] = rank[i] * 2 + ((rank[i] == target && static_cast<int>(i) != chosen) ? 1 : 0);
      }
      run(dense_ranks(next));
      if (best.truncated) return;
    }
  }
};

}  // namespace

std::vector<int> refine_ranks(const CanonGraph& g, std::vector<int> rank) {
  const std::size_t n = rank.size();
  int classes = count_classes(rank);
  using Sig = std::pair<int, std::vector<std::pair<int, int>>>;
  std::vector<Sig> sig(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      sig[i].first = rank[i];
      auto& nbr = sig[i].second;
      nbr.clear();
      for (const auto& nb : g.adj[i]) {
        nbr.emplace_back(g.edge_label[static_cast<std::size_t>(nb.bond)], rank[static_cast<std::size_t>(nb.atom)]);
      }
      std::sort(nbr.begin(), nbr.end());
    }
    auto next = dense_ranks(sig);
    const int next_classes = count_classes(next);
    rank = std::move(next);
    if (next_classes == classes) break;
    classes = next_classes;
  }
  return rank;
}

CanonResult canonical_ranking(const CanonGraph& graph, const RankEmitter& emit, std::size_t max_leaves) {
  Search search{graph, emit, max_leaves, {}, false};
  if (graph.adj.empty()) {
    search.best.text = emit({});
    return search.best;
  }
  search.run(dense_ranks(graph.invariant));
  return search.best;
}

std::string canonical_smiles(const Molecule& in, CanonOptions options) {
  const Molecule mol = options.keep_maps ? in : strip_maps(in);
  CanonGraph g;
  g.adj = adjacency_of(mol);
  g.edge_label.reserve(static_cast<std::size_t>(mol.num_bonds()));
  for (const auto& b : mol.bonds()) g.edge_label.push_back(static_cast<int>(b.order));
  g.invariant.reserve(static_cast<std::size_t>(mol.num_atoms()));
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const Atom& a = mol.atom(i);
    g.invariant.push_back({a.atomic_number, a.aromatic ? 1 : 0, mol.degree(i), mol.hydrogen_count(i),
                           a.formal_charge, a.isotope.value_or(0), static_cast<int>(a.chirality),
                           a.map_number.value_or(0)});
  }
  const auto emit = [&](std::span<const int> rank) {
    const EmitPlan plan = plan_emission(g.adj, rank);
    return render_plan(
        plan, [&](int i) { return smiles_atom_text(mol, i, options.keep_maps); },
        [&](int b, int from, int to) { return smiles_bond_text(mol, b, from, to); });
  };
  return canonical_ranking(g, emit).text;
}

std::optional<std::string> canonical_key(std::string_view smiles) {
  try {
    return canonical_smiles(parse_smiles(smiles));
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace retrokit::chem
