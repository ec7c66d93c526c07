#pragma once

#include <functional>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "retrokit/gen/generator.hpp"
#include "retrokit/perception/pattern.hpp"
#include "retrokit/rationale/rationale.hpp"

namespace retrokit::gen {

struct InputRecord {
  std::string id;
  std::string rxn;
};

struct VariantResult {
  std::string id;
  std::string rxn;
  int variant = 0;
  rationale::Links links;
};

/// Receives each completed variant. Calls are serialized by the pipeline.
class VariantSink {
 public:
  virtual ~VariantSink() = default;
  virtual void write(const VariantResult& v) = 0;
};

class MemorySink : public VariantSink {
 public:
  void write(const VariantResult& v) override { results.push_back(v); }
  std::vector<VariantResult> results;
};

/// Appends one JSON line per variant and flushes it, so a rerun can skip
/// everything already written.
class JsonlCheckpointSink : public VariantSink {
 public:
  explicit JsonlCheckpointSink(const std::string& path);
  void write(const VariantResult& v) override;

 private:
  std::string path_;
};

std::vector<VariantResult> read_checkpoint(const std::string& path);

struct GenReport {
  long records_in = 0;
  long dropped_mapping_failure = 0;
  /// Variants scheduled; equals completed + dropped_truncation + dropped_error.
  long produced = 0;
  long completed = 0;
  long dropped_truncation = 0;
  long dropped_error = 0;
  long skipped_from_checkpoint = 0;
  long in_flight_at_end = 0;
  std::size_t max_queue_depth = 0;
  int max_in_flight = 0;
  int max_in_flight_per_consumer = 0;
  double seconds = 0;
  double throughput = 0;  // completed variants per second
};

struct PipelineOptions {
  std::vector<perception::PatternDef> patterns;
  /// (id, variant) pairs already done; they are not scheduled again.
  std::set<std::pair<std::string, int>> done;
  /// Called for every generator request before it is issued.
  std::function<void(const std::string& id, int variant, rationale::LinkSlot slot)> on_request;
};

/// One producer builds each record's rationale and queues one task per
/// variant; `consumers` dispatchers each keep at most `per_consumer_concurrency`
/// variants in flight, guarded by a counting semaphore. Within a variant the
/// links are generated strictly in L12, L23, L34 order. A sink exception stops
/// the run and is rethrown.
GenReport run_pipeline(const std::vector<InputRecord>& records, const GenConfig& config, TextGenerator& generator,
                       VariantSink& sink, const PipelineOptions& options = {});

}  // namespace retrokit::gen
