#include <doctest.h>

#include <fstream>
#include <random>

#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/reaction.hpp"
#include "retrokit/chem/smiles.hpp"
#include "retrokit/cli/io.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/retro/consistency.hpp"
#include "retrokit/retro/diff.hpp"
#include "retrokit/retro/forward.hpp"
#include "retrokit/retro/synthon.hpp"
#include "retrokit/retro/template.hpp"
#include "support/oracles.hpp"
#include "support/worked_example.hpp"

using namespace retrokit;
using namespace retrokit::retro;

namespace {

chem::MappedReaction mapped(const std::string& rxn) { return chem::bind_atom_maps(chem::parse_rxn(rxn)); }

std::string canon(const std::string& s) { return chem::canonical_smiles(chem::parse_smiles(s)); }

/// Rewrites every map number m as f(m) in a reaction string.
std::string renumber(const std::string& rxn, const std::vector<int>& f) {
  std::string out;
  for (std::size_t i = 0; i < rxn.size(); ++i) {
    if (rxn[i] == ':' && i + 1 < rxn.size() && std::isdigit(static_cast<unsigned char>(rxn[i + 1]))) {
      std::size_t j = i + 1;
      int m = 0;
      while (j < rxn.size() && std::isdigit(static_cast<unsigned char>(rxn[j]))) m = m * 10 + (rxn[j++] - '0');
      out += ":" + std::to_string(f[static_cast<std::size_t>(m)]);
      i = j - 1;
    } else {
      out += rxn[i];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("bond diff of the worked example") {
  const auto mr = mapped(fixture::kWorkedRxn);
  const auto diff = diff_bonds(mr);
  const auto d = identify_disconnections(mr, diff);
  REQUIRE(d.size() == 1);
  CHECK(d[0].map_a == 4);
  CHECK(d[0].map_b == 6);
  CHECK(d[0].order == chem::BondOrder::Single);
  int broken_to_leaving = 0;
  for (const auto& c : diff.bond_changes) {
    if (c.kind == ChangeKind::Broken && c.map_b == 0) ++broken_to_leaving;
  }
  CHECK(broken_to_leaving == 1);
}

TEST_CASE("worked example instance and canonical templates") {
  const auto t = extract_template(mapped(fixture::kWorkedRxn));
  CHECK(t.instance_form == fixture::kInstanceTemplate);
  CHECK(t.canonical_form == fixture::kCanonicalTemplate);
  CHECK(canonicalize_template(std::string_view(fixture::kInstanceTemplate)) == fixture::kCanonicalTemplate);
  CHECK(canonicalize_template(std::string_view(fixture::kCanonicalTemplate)) == fixture::kCanonicalTemplate);
}

TEST_CASE("canonical template is invariant to map renumbering and precursor order") {
  std::mt19937_64 rng(5);
  for (const auto& rec : cli::read_reaction_records(oracle::data_path("desk_corpus.rxn"))) {
    const auto base = extract_template(mapped(rec.rxn)).canonical_form;
    const int n = mapped(rec.rxn).num_maps();
    std::vector<int> f(static_cast<std::size_t>(n) + 1);
    std::iota(f.begin(), f.end(), 0);
    std::shuffle(f.begin() + 1, f.end(), rng);
    const std::string renum = renumber(rec.rxn, f);
    INFO(rec.id);
    CHECK(extract_template(mapped(renum)).canonical_form == base);
    const auto arrow = rec.rxn.find(">>");
    const std::string lhs = rec.rxn.substr(0, arrow);
    const auto dot = lhs.find('.');
    if (dot != std::string::npos) {
      const std::string swapped = lhs.substr(dot + 1) + "." + lhs.substr(0, dot) + rec.rxn.substr(arrow);
      CHECK(extract_template(mapped(swapped)).canonical_form == base);
    }
  }
}

TEST_CASE("templates parse back to the same canonical form") {
  for (const auto& rec : cli::read_reaction_records(oracle::data_path("desk_corpus.rxn"))) {
    const auto t = extract_template(mapped(rec.rxn));
    INFO(rec.id);
    CHECK(canonicalize_template(parse_template(t.canonical_form)) == t.canonical_form);
    CHECK(canonicalize_template(parse_template(t.instance_form)) == t.canonical_form);
  }
}

TEST_CASE("reaction without changes has no template") {
  CHECK_THROWS_AS(extract_template(mapped("[CH3:1][OH:2]>>[CH3:1][OH:2]")), NoChangeError);
}

TEST_CASE("forward application regenerates the worked example product") {
  const std::vector<chem::Molecule> reactants = {chem::parse_smiles(fixture::kThiol),
                                                 chem::parse_smiles(fixture::kAcylChloride)};
  const auto products = apply_template_forward(std::string_view(fixture::kCanonicalTemplate), reactants);
  REQUIRE(products.size() == 1);
  CHECK(chem::canonical_smiles(products[0]) == canon(fixture::kProduct));
}

TEST_CASE("forward application finds every site") {
  const std::vector<chem::Molecule> reactants = {chem::parse_smiles("SCCS"), chem::parse_smiles("CC(=O)Cl")};
  const auto products = apply_template_forward(std::string_view(fixture::kCanonicalTemplate), reactants);
  REQUIRE(products.size() == 1);  // both thiols are equivalent
  CHECK(chem::canonical_smiles(products[0]) == canon("CC(=O)SCCS"));
  const std::vector<chem::Molecule> none = {chem::parse_smiles("CCO"), chem::parse_smiles("CC(=O)Cl")};
  CHECK(apply_template_forward(std::string_view(fixture::kCanonicalTemplate), none).empty());
}

TEST_CASE("template library predicts and maps") {
  TemplateLibrary lib({fixture::kCanonicalTemplate});
  const std::vector<chem::Molecule> reactants = {chem::parse_smiles(fixture::kAcylChloride),
                                                 chem::parse_smiles(fixture::kThiol)};
  const auto pred = lib.predict(reactants);
  REQUIRE(pred.size() == 1);
  CHECK(pred[0] == canon(fixture::kProduct));
  const auto mr = lib.map_reaction(reactants, pred[0]);
  REQUIRE(mr.has_value());
  CHECK(extract_template(*mr).canonical_form == fixture::kCanonicalTemplate);
  CHECK_FALSE(lib.map_reaction(reactants, canon("CCO")).has_value());
}

TEST_CASE("synthons of the worked example") {
  const auto mr = mapped(fixture::kWorkedRxn);
  const auto d = identify_disconnections(mr);
  const auto split = make_synthons(mr.product(), d[0]);
  CHECK_FALSE(split.ring_opened);
  REQUIRE(split.synthons.size() == 2);
  std::set<std::string> got = {split.synthons[0].smiles, split.synthons[1].smiles};
  std::set<std::string> want = {canon(fixture::kSynthonAcyl), canon(fixture::kSynthonThiol)};
  CHECK(got == want);
  for (const auto& s : split.synthons) {
    const bool acyl = s.smiles == canon(fixture::kSynthonAcyl);
    CHECK(oracle::brute_isomorphic(chem::parse_smiles(s.smiles),
                                   chem::parse_smiles(acyl ? fixture::kSynthonAcyl : fixture::kSynthonThiol)));
  }
  const auto joined = join_synthons(split);
  CHECK(chem::canonical_smiles(joined) == canon(fixture::kProduct));

  const auto eq = map_equivalents(mr, split.synthons);
  REQUIRE(eq.pairs.size() == 2);
  std::set<std::string> reactants = {eq.pairs[0].smiles, eq.pairs[1].smiles};
  CHECK(reactants == std::set<std::string>{canon(fixture::kAcylChloride), canon(fixture::kThiol)});
}

TEST_CASE("ring bond cut opens the ring") {
  const auto mr = mapped("[CH2:1]=[CH:2][CH:3]=[CH2:4].[CH2:5]=[CH2:6]>>[CH2:1]1[CH:2]=[CH:3][CH2:4][CH2:5][CH2:6]1");
  const auto d = identify_disconnections(mr);
  REQUIRE(d.size() == 2);
  const auto split = make_synthons(mr.product(), d[0]);
  CHECK(split.ring_opened);
  CHECK(split.synthons.size() == 1);
  CHECK_THROWS_AS(split.pair(), RingBondError);
  CHECK_THROWS_AS(make_synthons(mr.product(), Disconnection{1, 3, chem::BondOrder::Single}), std::invalid_argument);
}

TEST_CASE("self-consistency report itemizes failures") {
  const auto rep = check_self_consistency({{"ok", fixture::kWorkedRxn},
                                           {"same", "[CH3:1][OH:2]>>[CH3:1][OH:2]"},
                                           {"broken", "C1CC>>CC"}});
  CHECK(rep.reactions == 3);
  CHECK(rep.extracted == 1);
  CHECK(rep.regenerated == 1);
  CHECK(rep.rate() == 1.0);
  REQUIRE(rep.failures.size() == 2);
  CHECK(rep.failures[0].id == "same");
  CHECK(rep.failures[0].stage == "extract");
  const auto mr = mapped(fixture::kWorkedRxn);
  CHECK(regenerates_product(mr, fixture::kCanonicalTemplate));
  CHECK_FALSE(regenerates_product(mr, "[O:1]-[C:2]>>[O:1]=[C:2]"));
}
