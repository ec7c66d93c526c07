#pragma once

#include <string>
#include <utility>
#include <vector>

#include "retrokit/chem/reaction.hpp"

namespace retrokit::retro {

struct ConsistencyFailure {
  std::string id;
  /// "extract" when no template came out, "apply" when it did not regenerate the product.
  std::string stage;
  std::string detail;
};

struct ConsistencyReport {
  std::size_t reactions = 0;
  std::size_t extracted = 0;
  std::size_t regenerated = 0;
  std::vector<ConsistencyFailure> failures;
  /// regenerated / extracted, or 0 with nothing extracted.
  double rate() const { return extracted == 0 ? 0.0 : static_cast<double>(regenerated) / static_cast<double>(extracted); }
};

/// True when the canonical template, applied to the map-free precursors,
/// yields the map-free product among its candidates.
bool regenerates_product(const chem::MappedReaction& mapped, const std::string& canonical_template);

/// Extracts each (id, rxn) template and applies it back to its own precursors.
ConsistencyReport check_self_consistency(const std::vector<std::pair<std::string, std::string>>& reactions);

}  // namespace retrokit::retro
