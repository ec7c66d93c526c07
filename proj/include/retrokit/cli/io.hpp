#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "retrokit/eval/metrics.hpp"
#include "retrokit/gen/pipeline.hpp"

namespace retrokit::cli {

/// Reaction records from JSONL (`{id, rxn, ...}`) or from text lines of the
/// form `rxn[<TAB>id[<TAB>...]]`. Blank lines and `#` comments are skipped;
/// missing ids become `line-N`.
std::vector<gen::InputRecord> read_reaction_records(const std::string& path);

/// Sample sets from JSONL `{id, product, label_reactants, greedy, samples[]}`.
std::vector<eval::SampleSet> read_sample_sets(const std::string& path);

struct IngestedRecord {
  std::string id;
  std::string rxn;
  std::string product;
  std::string reactants;
  bool multi_label = false;
};

struct IngestDrop {
  std::string id;
  std::size_t line = 0;
  std::string reason;
  std::string detail;
};

struct IngestResult {
  std::vector<IngestedRecord> records;
  std::vector<IngestDrop> drops;
  std::size_t lines = 0;
  std::size_t duplicates = 0;
  std::size_t multi_label = 0;
};

/// Parses and validates each reaction, drops exact duplicates (same canonical
/// reactants and product) and flags products that occur with more than one
/// distinct reactant set. Records that fail are dropped with the error kind
/// (SyntaxError, ValenceError, MappingError) as reason.
IngestResult ingest(const std::vector<gen::InputRecord>& input);

nlohmann::json to_json(const IngestedRecord& r);

}  // namespace retrokit::cli
