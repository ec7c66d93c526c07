#pragma once

// Slow, obviously-correct reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/molecule.hpp"
#include "retrokit/chem/smiles.hpp"
#include "retrokit/perception/pattern.hpp"

namespace oracle {

using retrokit::chem::Molecule;

inline std::string data_path(const std::string& name) { return std::string(RETROKIT_DATA_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) {
  return std::string(RETROKIT_DATA_DIR) + "/../tests/fixtures/" + name;
}

inline std::vector<std::string> read_smiles_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

using AtomLabel = std::tuple<int, bool, int, int, int>;

inline AtomLabel atom_label(const Molecule& m, int i) {
  const auto& a = m.atom(i);
  return {a.atomic_number, a.aromatic, a.formal_charge, a.isotope.value_or(0), m.hydrogen_count(i)};
}

/// Order of the bond between i and j, or -1 when they are not bonded.
inline std::vector<std::vector<int>> bond_matrix(const Molecule& m) {
  const auto n = static_cast<std::size_t>(m.num_atoms());
  std::vector<std::vector<int>> mat(n, std::vector<int>(n, -1));
  for (const auto& b : m.bonds()) {
    mat[static_cast<std::size_t>(b.a)][static_cast<std::size_t>(b.b)] = static_cast<int>(b.order);
    mat[static_cast<std::size_t>(b.b)][static_cast<std::size_t>(b.a)] = static_cast<int>(b.order);
  }
  return mat;
}

/// Tries every bijection, extending a partial assignment only while labels
/// and the full bond matrix agree on the assigned atoms.
inline bool brute_isomorphic(const Molecule& x, const Molecule& y) {
  const int n = x.num_atoms();
  if (n != y.num_atoms() || x.num_bonds() != y.num_bonds()) return false;
  const auto mx = bond_matrix(x);
  const auto my = bond_matrix(y);
  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::function<bool(int)> extend = [&](int i) {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)] || atom_label(x, i) != atom_label(y, j)) continue;
      bool ok = true;
      for (int k = 0; k < i && ok; ++k) {
        ok = mx[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] ==
             my[static_cast<std::size_t>(j)][static_cast<std::size_t>(assign[static_cast<std::size_t>(k)])];
      }
      if (!ok) continue;
      assign[static_cast<std::size_t>(i)] = j;
      used[static_cast<std::size_t>(j)] = 1;
      if (extend(i + 1)) return true;
      used[static_cast<std::size_t>(j)] = 0;
    }
    return false;
  };
  return extend(0);
}

/// Same molecule with atom i moved to position perm[i] and the bond list shuffled.
inline Molecule permuted(const Molecule& m, const std::vector<int>& perm, std::mt19937_64& rng) {
  std::vector<retrokit::chem::Atom> atoms(static_cast<std::size_t>(m.num_atoms()));
  for (int i = 0; i < m.num_atoms(); ++i) atoms[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = m.atom(i);
  std::vector<retrokit::chem::Bond> bonds(m.bonds().begin(), m.bonds().end());
  for (auto& b : bonds) {
    b.a = perm[static_cast<std::size_t>(b.a)];
    b.b = perm[static_cast<std::size_t>(b.b)];
    if (rng() & 1) std::swap(b.a, b.b);
  }
  std::shuffle(bonds.begin(), bonds.end(), rng);
  return Molecule(std::move(atoms), std::move(bonds));
}

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Every injective assignment of pattern atoms to molecule atoms, found by
/// enumerating all ordered k-subsets and checking each one in full.
inline std::vector<std::vector<int>> brute_matches(const Molecule& mol, const retrokit::perception::Pattern& pat) {
  const int k = pat.num_atoms();
  const int n = mol.num_atoms();
  std::vector<std::vector<int>> out;
  std::vector<int> pick;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::function<void()> rec = [&] {
    if (static_cast<int>(pick.size()) == k) {
      for (int i = 0; i < k; ++i) {
        if (!retrokit::perception::atom_matches(pat.atoms()[static_cast<std::size_t>(i)], mol,
                                                pick[static_cast<std::size_t>(i)])) {
          return;
        }
      }
      for (const auto& b : pat.bonds()) {
        const int bi = mol.find_bond(pick[static_cast<std::size_t>(b.a)], pick[static_cast<std::size_t>(b.b)]);
        if (bi < 0 || !retrokit::perception::bond_matches(b.kind, mol.bond(bi).order)) return;
      }
      out.push_back(pick);
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = 1;
      pick.push_back(j);
      rec();
      pick.pop_back();
      used[static_cast<std::size_t>(j)] = 0;
    }
  };
  rec();
  return out;
}

/// Canonical reactant multiset, or empty on parse failure.
inline std::multiset<std::string> reactant_multiset(const std::string& s, bool& ok) {
  std::multiset<std::string> out;
  ok = true;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t dot = std::min(s.find('.', start), s.size());
    const std::string piece = s.substr(start, dot - start);
    if (!piece.empty()) {
      try {
        out.insert(retrokit::chem::canonical_smiles(retrokit::chem::parse_smiles(piece)));
      } catch (const std::exception&) {
        ok = false;
        return {};
      }
    }
    start = dot + 1;
  }
  if (out.empty()) ok = false;
  return out;
}

struct NaiveMetrics {
  double exact_at_1 = 0, roundtrip_at_1 = 0, exact_at_k = 0, roundtrip_at_k = 0;
  double feasible_ratio = 0, template_diversity = 0, invalid_ratio = 0;
};

struct NaiveInstance {
  std::string product;
  std::string label;
  std::string greedy;
  std::vector<std::string> samples;
};

/// The seven formulas evaluated literally with a double loop. `roundtrip`
/// decides feasibility; `template_of` names the template of a feasible sample.
inline NaiveMetrics naive_metrics(const std::vector<NaiveInstance>& data, int K,
                                  const std::function<bool(const std::string&, const std::string&)>& roundtrip,
                                  const std::function<std::string(const std::string&, const std::string&)>& template_of) {
  NaiveMetrics m;
  const double N = static_cast<double>(data.size());
  auto same = [](const std::string& a, const std::string& b) {
    bool oka = false, okb = false;
    const auto x = reactant_multiset(a, oka);
    const auto y = reactant_multiset(b, okb);
    return oka && okb && x == y;
  };
  for (const auto& d : data) {
    m.exact_at_1 += same(d.greedy, d.label) ? 1 : 0;
    m.roundtrip_at_1 += roundtrip(d.product, d.greedy) ? 1 : 0;
    double best_exact = 0, best_rt = 0, feasible = 0, invalid = 0;
    std::set<std::string> templates;
    for (int k = 0; k < K; ++k) {
      const std::string& s = d.samples[static_cast<std::size_t>(k)];
      best_exact = std::max(best_exact, same(s, d.label) ? 1.0 : 0.0);
      const bool rt = roundtrip(d.product, s);
      best_rt = std::max(best_rt, rt ? 1.0 : 0.0);
      feasible += rt ? 1 : 0;
      bool ok = false;
      reactant_multiset(s, ok);
      invalid += ok ? 0 : 1;
      if (rt) {
        const std::string t = template_of(d.product, s);
        if (!t.empty()) templates.insert(t);
      }
    }
    m.exact_at_k += best_exact;
    m.roundtrip_at_k += best_rt;
    m.feasible_ratio += feasible / K;
    m.invalid_ratio += invalid / K;
    m.template_diversity += static_cast<double>(templates.size());
  }
  m.exact_at_1 /= N;
  m.roundtrip_at_1 /= N;
  m.exact_at_k /= N;
  m.roundtrip_at_k /= N;
  m.feasible_ratio /= N;
  m.invalid_ratio /= N;
  m.template_diversity /= N;
  return m;
}

/// Rarity score S(x) computed from scratch: count every n-gram of the corpus,
/// then average -ln(c/N) over x's n-grams (unseen: -ln(1/(N+V))).
inline double brute_rarity(const std::vector<std::string>& corpus, const std::string& x, int n) {
  std::map<std::string, double> counts;
  double total = 0;
  for (const auto& s : corpus) {
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= s.size(); ++i) {
      counts[s.substr(i, static_cast<std::size_t>(n))] += 1;
      total += 1;
    }
  }
  double sum = 0;
  int L = 0;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= x.size(); ++i) {
    const auto it = counts.find(x.substr(i, static_cast<std::size_t>(n)));
    const double p = it == counts.end() ? 1.0 / (total + static_cast<double>(counts.size())) : it->second / total;
    sum += -std::log(p);
    ++L;
  }
  return L == 0 ? 0.0 : sum / L;
}

}  // namespace oracle
