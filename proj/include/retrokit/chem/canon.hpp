#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "retrokit/chem/emit.hpp"
#include "retrokit/chem/molecule.hpp"

namespace retrokit::chem {

/// Coloured graph handed to the canonical ranking engine. `edge_label[b]` is
/// the colour of bond b; `invariant[i]` is compared lexicographically.
struct CanonGraph {
  Adjacency adj;
  std::vector<int> edge_label;
  std::vector<std::vector<std::int64_t>> invariant;
};

/// Produces text for a complete ranking (all ranks distinct).
using RankEmitter = std::function<std::string(std::span<const int> rank)>;

struct CanonResult {
  std::vector<int> rank;
  std::string text;
  std::size_t leaves = 0;
  bool truncated = false;
};

/// Iterative neighbourhood refinement from the initial invariants, then
/// individualisation of the first tied class, recursing over every member.
/// The emitted text that is lexicographically smallest across all leaves is
/// kept. Members of a tied class that are pairwise twins (same neighbours) are
/// interchangeable, so only one is tried. Search stops after `max_leaves`.
CanonResult canonical_ranking(const CanonGraph& graph, const RankEmitter& emit,
                              std::size_t max_leaves = 1u << 15);

/// Stable refinement only (no tie breaking). Exposed for tests.
std::vector<int> refine_ranks(const CanonGraph& graph, std::vector<int> rank);

struct CanonOptions {
  /// Keep atom-map numbers as part of the graph identity and in the output.
  bool keep_maps = false;
};

std::string canonical_smiles(const Molecule& mol, CanonOptions options = {});

/// Parses and canonicalises, returning nullopt for unparseable input.
std::optional<std::string> canonical_key(std::string_view smiles);

}  // namespace retrokit::chem
