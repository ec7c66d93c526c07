#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "retrokit/chem/molecule.hpp"
#include "retrokit/rlvr/forward_model.hpp"

namespace retrokit::rlvr {

struct RoundTrip {
  bool valid = false;
  bool success = false;
};

/// Round-trip check of predicted reactants against a map-free canonical
/// product. Unparseable predictions are invalid and fail.
RoundTrip check_roundtrip(const std::string& product_canonical, std::string_view predicted, ForwardModel& fwd,
                          VerifierCache* cache);

/// 1 when some forward candidate of `predicted` is the product, else 0.
int roundtrip_reward(const chem::Molecule& product, std::string_view predicted, ForwardModel& fwd,
                     VerifierCache* cache);

/// 1 when the canonical reactant multisets agree, ignoring component order.
int exact_reward(std::string_view labeled, std::string_view predicted);

/// (R_i - mean) / std with the population std; a group with zero spread gets zeros.
std::vector<double> group_advantages(const std::vector<double>& rewards);

struct TokenScores {
  std::vector<double> logp_new;
  std::vector<double> logp_old;
  /// Nonzero for tokens that count (assistant tokens).
  std::vector<char> mask;

  double ratio(std::size_t t) const;
};

struct ClipConfig {
  double eps_low = 0.2;
  double eps_high = 0.2;
};

void validate(const ClipConfig& clip);

/// Sum over masked tokens of min(r*A, clip(r, 1-eps_low, 1+eps_high)*A).
double clipped_token_sum(const TokenScores& scores, double advantage, const ClipConfig& clip);

/// Group objective: (1/G) sum_i clipped_token_sum(o_i, A_i).
double clipped_objective(const std::vector<TokenScores>& group, const std::vector<double>& advantages,
                         const ClipConfig& clip);

/// One output scored alone (G = 1).
double clipped_objective(const TokenScores& scores, double advantage, const ClipConfig& clip);

/// Mean of -logp_new over masked tokens.
double sft_loss(const TokenScores& scores);

}  // namespace retrokit::rlvr
