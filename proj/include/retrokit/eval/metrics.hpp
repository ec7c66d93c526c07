#pragma once

#include <string>
#include <vector>

#include "retrokit/rlvr/forward_model.hpp"

namespace retrokit::eval {

struct SampleSet {
  std::string id;
  std::string product;
  std::string label_reactants;
  std::string greedy;
  std::vector<std::string> samples;
};

/// Per-instance indicators for the first K samples.
struct InstanceOutcome {
  std::string id;
  bool greedy_exact = false;
  bool greedy_roundtrip = false;
  std::vector<char> exact;
  std::vector<char> feasible;
  std::vector<char> invalid;
  /// Canonical template per sample; empty when infeasible or not extractable.
  std::vector<std::string> templates;
};

struct InstanceMetrics {
  std::string id;
  bool exact_at_1 = false;
  bool roundtrip_at_1 = false;
  bool exact_at_k = false;
  bool roundtrip_at_k = false;
  int feasible = 0;
  int invalid = 0;
  int distinct_templates = 0;
};

struct MetricsReport {
  int k = 0;
  double exact_at_1 = 0;
  double roundtrip_at_1 = 0;
  double exact_at_k = 0;
  double roundtrip_at_k = 0;
  double feasible_ratio = 0;
  double template_diversity = 0;
  double invalid_ratio = 0;
  std::vector<InstanceMetrics> per_instance;
};

/// Scores every instance once at depth K. Throws std::invalid_argument when
/// K < 1 or an instance has fewer than K samples. Instances run in parallel
/// with OpenMP; `fwd` and `cache` must be thread-safe.
std::vector<InstanceOutcome> evaluate_instances(const std::vector<SampleSet>& samples, rlvr::ForwardModel& fwd,
                                                rlvr::VerifierCache* cache, int k);

/// Same results, one instance after another.
std::vector<InstanceOutcome> evaluate_instances_serial(const std::vector<SampleSet>& samples, rlvr::ForwardModel& fwd,
                                                       rlvr::VerifierCache* cache, int k);

/// Aggregates over the first `k` samples of each outcome.
MetricsReport summarize(const std::vector<InstanceOutcome>& outcomes, int k);

MetricsReport compute_metrics(const std::vector<SampleSet>& samples, rlvr::ForwardModel& fwd,
                              rlvr::VerifierCache* cache, int k);
MetricsReport compute_metrics_serial(const std::vector<SampleSet>& samples, rlvr::ForwardModel& fwd,
                                     rlvr::VerifierCache* cache, int k);

}  // namespace retrokit::eval
