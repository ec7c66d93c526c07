#include "retrokit/eval/metrics.hpp"

#include <exception>
#include <set>
#include <stdexcept>

#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/smiles.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/retro/template.hpp"
#include "retrokit/rlvr/reward.hpp"

namespace retrokit::eval {
namespace {

std::optional<std::string> product_key(const std::string& product) {
  try {
    return chem::canonical_smiles(chem::parse_smiles(product));
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string feasible_template(const std::string& predicted, const std::string& product_canonical,
                              rlvr::ForwardModel& fwd) {
  try {
    const auto mapped = fwd.explain(rlvr::parse_reactants(predicted), product_canonical);
    if (!mapped) return {};
    return retro::extract_template(*mapped).canonical_form;
  } catch (const Error&) {
    return {};
  }
}

InstanceOutcome evaluate_one(const SampleSet& s, rlvr::ForwardModel& fwd, rlvr::VerifierCache* cache, int k) {
  InstanceOutcome out;
  out.id = s.id;
  out.exact.assign(static_cast<std::size_t>(k), 0);
  out.feasible.assign(static_cast<std::size_t>(k), 0);
  out.invalid.assign(static_cast<std::size_t>(k), 0);
  out.templates.assign(static_cast<std::size_t>(k), {});
  const auto product = product_key(s.product);
  out.greedy_exact = rlvr::exact_reward(s.label_reactants, s.greedy) == 1;
  if (product) out.greedy_roundtrip = rlvr::check_roundtrip(*product, s.greedy, fwd, cache).success;
  for (int j = 0; j < k; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    const std::string& pred = s.samples[idx];
    out.exact[idx] = rlvr::exact_reward(s.label_reactants, pred) == 1;
    if (!product) {
      try {
        rlvr::parse_reactants(pred);
      } catch (const Error&) {
        out.invalid[idx] = 1;
      }
      continue;
    }
    const auto rt = rlvr::check_roundtrip(*product, pred, fwd, cache);
    out.invalid[idx] = !rt.valid;
    out.feasible[idx] = rt.success;
    if (rt.success) out.templates[idx] = feasible_template(pred, *product, fwd);
  }
  return out;
}

void check_inputs(const std::vector<SampleSet>& samples, int k) {
  if (k < 1) throw std::invalid_argument("K must be at least 1");
  for (const auto& s : samples) {
    if (static_cast<int>(s.samples.size()) < k) {
      throw std::invalid_argument("instance " + s.id + " has " + std::to_string(s.samples.size()) +
                                  " samples, fewer than K=" + std::to_string(k));
    }
  }
}

}  // namespace

std::vector<InstanceOutcome> evaluate_instances_serial(const std::vector<SampleSet>& samples, rlvr::ForwardModel& fwd,
                                                       rlvr::VerifierCache* cache, int k) {
  check_inputs(samples, k);
  std::vector<InstanceOutcome> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(evaluate_one(s, fwd, cache, k));
  return out;
}

std::vector<InstanceOutcome> evaluate_instances(const std::vector<SampleSet>& samples, rlvr::ForwardModel& fwd,
                                                rlvr::VerifierCache* cache, int k) {
  check_inputs(samples, k);
  std::vector<InstanceOutcome> out(samples.size());
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
  std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = evaluate_one(samples[static_cast<std::size_t>(i)], fwd, cache, k);
    } catch (...) {
#pragma omp critical(retrokit_eval_error)
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

MetricsReport summarize(const std::vector<InstanceOutcome>& outcomes, int k) {
  MetricsReport r;
  r.k = k;
  if (outcomes.empty()) return r;
  for (const auto& o : outcomes) {
    if (k < 1 || static_cast<std::size_t>(k) > o.feasible.size()) {
      throw std::invalid_argument("k outside the evaluated depth");
    }
    InstanceMetrics m;
    m.id = o.id;
    m.exact_at_1 = o.greedy_exact;
    m.roundtrip_at_1 = o.greedy_roundtrip;
    std::set<std::string> templates;
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
      m.exact_at_k = m.exact_at_k || o.exact[j];
      m.roundtrip_at_k = m.roundtrip_at_k || o.feasible[j];
      m.feasible += o.feasible[j] ? 1 : 0;
      m.invalid += o.invalid[j] ? 1 : 0;
      if (o.feasible[j] && !o.templates[j].empty()) templates.insert(o.templates[j]);
    }
    m.distinct_templates = static_cast<int>(templates.size());
    r.exact_at_1 += m.exact_at_1;
    r.roundtrip_at_1 += m.roundtrip_at_1;
    r.exact_at_k += m.exact_at_k;
    r.roundtrip_at_k += m.roundtrip_at_k;
    r.feasible_ratio += static_cast<double>(m.feasible) / k;
    r.invalid_ratio += static_cast<double>(m.invalid) / k;
    r.template_diversity += m.distinct_templates;
    r.per_instance.push_back(std::move(m));
  }
  const double n = static_cast<double>(outcomes.size());
  r.exact_at_1 /= n;
  r.roundtrip_at_1 /= n;
  r.exact_at_k /= n;
  r.roundtrip_at_k /= n;
  r.feasible_ratio /= n;
  r.invalid_ratio /= n;
  r.template_diversity /= n;
  return r;
}

MetricsReport compute_metrics(const std::vector<SampleSet>& samples, rlvr::ForwardModel& fwd,
                              rlvr::VerifierCache* cache, int k) {
  return summarize(evaluate_instances(samples, fwd, cache, k), k);
}

MetricsReport compute_metrics_serial(const std::vector<SampleSet>& samples, rlvr::ForwardModel& fwd,
                                     rlvr::VerifierCache* cache, int k) {
  return summarize(evaluate_instances_serial(samples, fwd, cache, k), k);
}

}  // namespace retrokit::eval
