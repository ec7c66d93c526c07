#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "retrokit/chem/reaction.hpp"
#include "retrokit/gen/generator.hpp"
#include "retrokit/perception/product.hpp"
#include "retrokit/retro/diff.hpp"

namespace retrokit::rationale {

/// R2: the product-side reaction core (changed atoms plus pi context).
struct CandidateStructure {
  std::string smiles;
  std::vector<int> maps;
  bool operator==(const CandidateStructure&) const = default;
};

/// R3: the chosen formed bond and the synthons its cleavage gives.
struct DisconnectionStep {
  retro::Disconnection bond;
  std::vector<std::string> synthons;
  bool operator==(const DisconnectionStep&) const = default;
};

struct EquivalentEntry {
  std::string synthon;
  std::string reactant;
  bool operator==(const EquivalentEntry&) const = default;
};

/// R4: synthon to synthetic-equivalent assignments.
struct EquivalentStep {
  std::vector<EquivalentEntry> pairs;
  bool operator==(const EquivalentStep&) const = default;
};

/// Linking texts between consecutive steps; empty means absent.
struct Links {
  std::string l12;
  std::string l23;
  std::string l34;
  bool empty() const { return l12.empty() && l23.empty() && l34.empty(); }
  bool operator==(const Links&) const = default;
};

struct Rationale {
  perception::ProductInfo r1;
  CandidateStructure r2;
  DisconnectionStep r3;
  EquivalentStep r4;
  Links links;
  std::vector<std::string> answer;
  bool operator==(const Rationale&) const = default;
};

/// What could be recovered from free text; absent blocks stay empty.
struct PartialRationale {
  std::optional<perception::ProductInfo> r1;
  std::optional<CandidateStructure> r2;
  std::optional<DisconnectionStep> r3;
  std::optional<EquivalentStep> r4;
  Links links;
  std::optional<std::vector<std::string>> answer;
  std::optional<Rationale> complete() const;
};

/// Uses the first formed bond. Throws NoChangeError for reactions without
/// changes, NoDisconnectionError when no bond is formed, AmbiguityError from
/// equivalent mapping.
Rationale build_rationale(const chem::MappedReaction& mapped, const std::vector<perception::PatternDef>& patterns);

std::string order_name(chem::BondOrder o);
std::optional<chem::BondOrder> order_from_name(const std::string& s);

std::string render(const Rationale& r);
std::string render_block(const Rationale& r, int step);

PartialRationale parse_output(const std::string& text);

struct StepScore {
  bool atom_mapping = false;
  bool functional_groups = false;
  bool smiles_stats = false;
  bool candidate_structure = false;
  bool disconnection = false;
  bool synthons = false;
  bool equivalents = false;
  bool all() const {
    return atom_mapping && functional_groups && smiles_stats && candidate_structure && disconnection && synthons &&
           equivalents;
  }
};

StepScore score_steps(const PartialRationale& pred, const Rationale& gold);

enum class LinkSlot { L12, L23, L34 };

std::string slot_name(LinkSlot slot);

/// Prompt for one link. Each prompt carries the reaction, every step up to
/// the slot's right-hand step, and the links already written.
std::string link_prompt(const Rationale& r, const std::string& reaction, LinkSlot slot);

enum class VariantStatus { Ok, Truncated, Failed };

struct VariantLinks {
  VariantStatus status = VariantStatus::Ok;
  Links links;
};

/// Generates L12, L23 and L34 for one variant, in that order. A transport
/// error is retried once; a truncated completion stops the variant.
VariantLinks generate_variant(const Rationale& r, const std::string& reaction, int variant,
                              gen::TextGenerator& generator, const gen::GenConfig& config,
                              const std::function<void(LinkSlot)>& before_request = {});

struct LinkOutcome {
  std::vector<Rationale> variants;
  int dropped_truncation = 0;
  int dropped_error = 0;
};

/// Generates `n` variants concurrently with generate_variant; failed variants are dropped.
LinkOutcome orchestrate_links(const Rationale& r, const std::string& reaction, gen::TextGenerator& generator,
                              const gen::GenConfig& config, int n);

}  // namespace retrokit::rationale
