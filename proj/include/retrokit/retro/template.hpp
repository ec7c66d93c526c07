#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "retrokit/chem/emit.hpp"
#include "retrokit/chem/reaction.hpp"
#include "retrokit/perception/pattern.hpp"
#include "retrokit/retro/diff.hpp"

namespace retrokit::retro {

struct TemplateAtom {
  int atomic_number = 6;
  bool aromatic = false;
  int charge = 0;
  /// 0 for unmapped atoms (leaving groups and pi context).
  int map = 0;
  bool operator==(const TemplateAtom&) const = default;
};

struct TemplateBond {
  int a = 0;
  int b = 0;
  chem::BondOrder order = chem::BondOrder::Single;
  bool operator==(const TemplateBond&) const = default;
};

struct TemplateSide {
  std::vector<TemplateAtom> atoms;
  std::vector<TemplateBond> bonds;
  chem::Adjacency adjacency() const;
  /// Connected components, each listed by ascending atom index, ordered by first atom.
  std::vector<std::vector<int>> fragments() const;
  int find_bond(int a, int b) const;
  /// The side as a substructure pattern: element, aromaticity and charge are
  /// matched exactly, hydrogen counts are free, bonds match their written order.
  perception::Pattern as_pattern() const;
};

struct TemplateGraph {
  TemplateSide lhs;
  TemplateSide rhs;
};

struct ReactionTemplate {
  std::vector<std::string> lhs_fragments;
  std::vector<std::string> rhs_fragments;
  std::string instance_form;
  std::string canonical_form;
  TemplateGraph graph;
};

/// Throws NoChangeError when the mapped reaction changes nothing.
ReactionTemplate extract_template(const chem::MappedReaction& mapped);
ReactionTemplate extract_template(const chem::MappedReaction& mapped, const ReactionDiff& diff);

/// Accepts both `(a).(b)>>(c)` and `a.b>>c`. Throws PatternSyntaxError.
TemplateGraph parse_template(std::string_view text);

/// Maps are renumbered 1..k by first appearance in the canonically written
/// product side; fragments on each side are ordered by (atom count, text).
std::string canonicalize_template(const TemplateGraph& graph);
std::string canonicalize_template(const ReactionTemplate& t);
std::string canonicalize_template(std::string_view text);

std::string template_atom_text(const TemplateAtom& a);
std::string template_bond_text(chem::BondOrder order);

}  // namespace retrokit::retro
