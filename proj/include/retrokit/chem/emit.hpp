#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "retrokit/chem/molecule.hpp"

namespace retrokit::chem {

using Adjacency = std::vector<std::vector<Neighbor>>;

/// Depth-first layout of a graph: which edges are tree edges, which are ring
/// closures, and the order atoms will appear in the text. Traversal starts in
/// each component at its minimum-rank atom and visits neighbours by ascending rank.
struct EmitPlan {
  std::vector<int> order;
  std::vector<int> roots;
  std::vector<std::vector<Neighbor>> children;
  std::vector<std::vector<Neighbor>> ring_opens;
  std::vector<std::vector<Neighbor>> ring_closes;
};

EmitPlan plan_emission(const Adjacency& adj, std::span<const int> rank);

using AtomTextFn = std::function<std::string(int atom)>;
/// Bond symbol written between `from` and `to` (from is written first).
using BondTextFn = std::function<std::string(int bond, int from, int to)>;

/// Renders a plan; components are joined with `separator`.
std::string render_plan(const EmitPlan& plan, const AtomTextFn& atom_text,
                        const BondTextFn& bond_text, std::string_view separator = ".");

Adjacency adjacency_of(const Molecule& mol);

}  // namespace retrokit::chem
