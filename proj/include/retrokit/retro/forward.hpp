#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "retrokit/chem/reaction.hpp"
#include "retrokit/retro/template.hpp"

namespace retrokit::retro {

struct ForwardCandidate {
  chem::Molecule product;
  std::string canonical;
  /// Reactant atom each product atom came from; molecule = -1 for atoms the
  /// template creates.
  std::vector<chem::AtomRef> source;
};

inline constexpr std::size_t kDefaultMatchLimit = 2000;

/// Applies the template's lhs->rhs edit at every match of the lhs on the
/// reactants. Candidates are deduplicated by canonical SMILES and sorted by it.
std::vector<ForwardCandidate> apply_template_traced(const TemplateGraph& t, std::span<const chem::Molecule> reactants,
                                                    std::size_t match_limit = kDefaultMatchLimit);

std::vector<chem::Molecule> apply_template_forward(const ReactionTemplate& t, std::span<const chem::Molecule> reactants);
std::vector<chem::Molecule> apply_template_forward(std::string_view template_text,
                                                   std::span<const chem::Molecule> reactants);

/// A set of canonical templates applied together as a forward oracle.
class TemplateLibrary {
 public:
  TemplateLibrary() = default;
  explicit TemplateLibrary(const std::vector<std::string>& canonical_forms);

  void add(const std::string& canonical_form);
  std::size_t size() const { return forms_.size(); }
  const std::vector<std::string>& forms() const { return forms_; }

  /// Canonical SMILES of every product any template yields, sorted and unique.
  std::vector<std::string> predict(std::span<const chem::Molecule> reactants) const;

  /// Atom-mapped reaction from `reactants` to a product canonically equal to
  /// `product_canonical`, using the first template that produces it.
  std::optional<chem::MappedReaction> map_reaction(std::span<const chem::Molecule> reactants,
                                                   const std::string& product_canonical) const;

 private:
  std::vector<std::string> forms_;
  std::vector<TemplateGraph> graphs_;
};

}  // namespace retrokit::retro
