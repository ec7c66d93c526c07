#include "retrokit/rlvr/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "retrokit/chem/canon.hpp"
#include "retrokit/errors.hpp"

namespace retrokit::rlvr {

RoundTrip check_roundtrip(const std::string& product_canonical, std::string_view predicted, ForwardModel& fwd,
                          VerifierCache* cache) {
  std::vector<chem::Molecule> reactants;
  try {
    reactants = parse_reactants(predicted);
  } catch (const Error&) {
    return {};
  }
  RoundTrip out;
  out.valid = true;
  try {
    const auto candidates = cached_predict(reactants, fwd, cache);
    out.success = std::find(candidates.begin(), candidates.end(), product_canonical) != candidates.end();
  } catch (const std::exception& e) {
    spdlog::warn("forward model failed: {}", e.what());
  }
  return out;
}

int roundtrip_reward(const chem::Molecule& product, std::string_view predicted, ForwardModel& fwd,
                     VerifierCache* cache) {
  return check_roundtrip(chem::canonical_smiles(product), predicted, fwd, cache).success ? 1 : 0;
}

int exact_reward(std::string_view labeled, std::string_view predicted) {
  try {
    return reactant_key(parse_reactants(labeled)) == reactant_key(parse_reactants(predicted)) ? 1 : 0;
  } catch (const Error&) {
    return 0;
  }
}

std::vector<double> group_advantages(const std::vector<double>& rewards) {
  const double g = static_cast<double>(rewards.size());
  double mean = 0;
  for (double r : rewards) mean += r;
  mean /= g;
  double var = 0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / g);
  std::vector<double> out(rewards.size(), 0.0);
  if (sd == 0) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = (rewards[i] - mean) / sd;
  return out;
}

double TokenScores::ratio(std::size_t t) const { return std::exp(logp_new.at(t) - logp_old.at(t)); }

void validate(const ClipConfig& clip) {
  if (!(clip.eps_low > 0 && clip.eps_low < 1) || !(clip.eps_high > 0 && clip.eps_high < 1)) {
    throw std::invalid_argument("clip epsilons must lie in (0, 1)");
  }
}

double clipped_token_sum(const TokenScores& scores, double advantage, const ClipConfig& clip) {
  double sum = 0;
  for (std::size_t t = 0; t < scores.mask.size(); ++t) {
    if (!scores.mask[t]) continue;
    const double r = scores.ratio(t);
    const double clipped = std::clamp(r, 1.0 - clip.eps_low, 1.0 + clip.eps_high);
    sum += std::min(r * advantage, clipped * advantage);
  }
  return sum;
}

double clipped_objective(const std::vector<TokenScores>& group, const std::vector<double>& advantages,
                         const ClipConfig& clip) {
  if (group.empty() || group.size() != advantages.size()) {
    throw std::invalid_argument("group and advantages must be non-empty and the same size");
  }
  validate(clip);
  double total = 0;
  for (std::size_t i = 0; i < group.size(); ++i) total += clipped_token_sum(group[i], advantages[i], clip);
  return total / static_cast<double>(group.size());
}

double clipped_objective(const TokenScores& scores, double advantage, const ClipConfig& clip) {
  return clipped_objective(std::vector<TokenScores>{scores}, std::vector<double>{advantage}, clip);
}

double sft_loss(const TokenScores& scores) {
  double sum = 0;
  int n = 0;
  for (std::size_t t = 0; t < scores.mask.size(); ++t) {
    if (!scores.mask[t]) continue;
    sum -= scores.logp_new.at(t);
    ++n;
  }
  if (n == 0) throw std::invalid_argument("mask selects no tokens");
  return sum / n;
}

}  // namespace retrokit::rlvr
