#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "retrokit/chem/molecule.hpp"
#include "retrokit/gen/generator.hpp"
#include "retrokit/retro/forward.hpp"

namespace retrokit::rlvr {

/// Forward reaction predictor f(reactants) -> candidate products, each as a
/// map-free canonical SMILES.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;
  virtual std::vector<std::string> predict(const std::vector<chem::Molecule>& reactants) = 0;

  /// Atom-mapped reaction from `reactants` to the product, when the model can
  /// say how it got there. Used to extract templates of feasible candidates.
  virtual std::optional<chem::MappedReaction> explain(const std::vector<chem::Molecule>& reactants,
                                                      const std::string& product_canonical) {
    (void)reactants;
    (void)product_canonical;
    return std::nullopt;
  }
};

/// Rule-based oracle: every product any library template yields.
class TemplateOracle : public ForwardModel {
 public:
  explicit TemplateOracle(retro::TemplateLibrary library) : library_(std::move(library)) {}
  std::vector<std::string> predict(const std::vector<chem::Molecule>& reactants) override;
  std::optional<chem::MappedReaction> explain(const std::vector<chem::Molecule>& reactants,
                                              const std::string& product_canonical) override {
    return library_.map_reaction(reactants, product_canonical);
  }
  std::size_t calls() const { return calls_; }

 private:
  retro::TemplateLibrary library_;
  std::atomic<std::size_t> calls_{0};
};

/// Sends the reactant SMILES as the user message to a chat-completion
/// service and reads one product SMILES back. An unparseable or failed reply
/// yields no candidates.
class ServiceForwardModel : public ForwardModel {
 public:
  ServiceForwardModel(std::shared_ptr<gen::TextGenerator> client, gen::GenConfig config)
      : client_(std::move(client)), config_(std::move(config)) {}
  std::vector<std::string> predict(const std::vector<chem::Molecule>& reactants) override;

 private:
  std::shared_ptr<gen::TextGenerator> client_;
  gen::GenConfig config_;
};

/// Splits `a.b.c` into molecules, one per top-level piece. Throws
/// retrokit::Error for unparseable text or an empty list.
std::vector<chem::Molecule> parse_reactants(std::string_view smiles);

/// Canonical, map-free, order-independent key for a reactant set.
std::string reactant_key(const std::vector<chem::Molecule>& reactants);

/// Thread-safe memo of forward predictions keyed by reactant_key. With a
/// path, entries are appended to it as JSONL `{key, value}` and reloaded on
/// construction.
class VerifierCache {
 public:
  VerifierCache() = default;
  explicit VerifierCache(std::string path);

  std::optional<std::vector<std::string>> find(const std::string& key) const;
  void store(const std::string& key, const std::vector<std::string>& value);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::vector<std::string>> map_;
  std::string path_;
};

/// Forward candidates for the reactants, consulting and filling the cache.
std::vector<std::string> cached_predict(const std::vector<chem::Molecule>& reactants, ForwardModel& fwd,
                                        VerifierCache* cache);

}  // namespace retrokit::rlvr
