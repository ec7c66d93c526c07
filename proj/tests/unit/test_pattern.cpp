#include <doctest.h>

#include <sstream>

#include "retrokit/chem/reaction.hpp"
#include "retrokit/chem/smiles.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/perception/pattern.hpp"
#include "retrokit/perception/product.hpp"
#include "support/oracles.hpp"
#include "support/worked_example.hpp"

using namespace retrokit;
using namespace retrokit::perception;

namespace {

std::vector<std::vector<int>> sorted(std::vector<std::vector<int>> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("pattern atoms: case, brackets, wildcard and atomic numbers") {
  const Pattern p = Pattern::parse("[NH2]c*[#8][O-:3]");
  REQUIRE(p.num_atoms() == 5);
  CHECK(p.atoms()[0].atomic_number == 7);
  CHECK(p.atoms()[0].total_h == 2);
  CHECK(p.atoms()[1].aromatic);
  CHECK(p.atoms()[2].any);
  CHECK(p.atoms()[3].either_aromaticity);
  CHECK(p.atoms()[4].charge == -1);
  CHECK(p.atoms()[4].map_number == 3);
  CHECK_THROWS_AS(Pattern::parse("C/C"), PatternSyntaxError);
  CHECK_THROWS_AS(Pattern::parse("C[Xx]"), PatternSyntaxError);
  CHECK_THROWS_AS(Pattern::parse("[#0]"), PatternSyntaxError);
}

TEST_CASE("enumerate_matches agrees with exhaustive search") {
  const char* mols[] = {"CC(=O)OCC", "c1ccccc1CC(=O)N", "OCC(O)CO", "C1CC1C(=O)Cl", "CC(C)(C)c1ccncc1", "NCCN"};
  const char* pats[] = {"C=O", "CO", "*C(=O)*", "cc", "C[OH1]", "[#6]~[#8]", "C-C", "c:n", "N"};
  for (const char* m : mols) {
    const auto mol = chem::parse_smiles(m);
    for (const char* p : pats) {
      Pattern pat;
      try {
        pat = Pattern::parse(p);
      } catch (const PatternSyntaxError&) {
        continue;
      }
      INFO(m << " / " << p);
      CHECK(sorted(enumerate_matches(mol, pat, 100000)) == sorted(oracle::brute_matches(mol, pat)));
    }
  }
}

TEST_CASE("match_pattern reports each atom set once") {
  const auto mol = chem::parse_smiles("c1ccccc1");
  const auto all = enumerate_matches(mol, Pattern::parse("c1ccccc1"), 1000);
  CHECK(all.size() == 12);
  CHECK(match_pattern(mol, Pattern::parse("c1ccccc1")).size() == 1);
}

TEST_CASE("bare symbols require zero charge, implicit bonds are single or aromatic") {
  CHECK(match_pattern(chem::parse_smiles("C[N+](C)(C)C"), Pattern::parse("CN")).empty());
  CHECK(match_pattern(chem::parse_smiles("c1ccccc1C"), Pattern::parse("cC")).size() == 1);
  CHECK(match_pattern(chem::parse_smiles("C=C"), Pattern::parse("CC")).empty());
  CHECK(match_pattern(chem::parse_smiles("CC"), Pattern::parse("C:C")).empty());
}

TEST_CASE("pattern table loading validates every line") {
  std::istringstream good("# comment\n\nketone\t[#6]C(=O)[#6]\namine\tC[NH2]\n");
  const auto defs = read_pattern_table(good);
  REQUIRE(defs.size() == 2);
  CHECK(defs[0].name == "ketone");
  std::istringstream bad("ok\tCC\nbroken\tC(\n");
  try {
    read_pattern_table(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK(load_pattern_table(oracle::data_path("functional_groups.tsv")).size() >= 40);
}

TEST_CASE("product analysis on the thioester example") {
  const auto mr = chem::bind_atom_maps(chem::parse_rxn(fixture::kWorkedRxn));
  const auto info = analyze_product(mr, load_pattern_table(oracle::data_path("functional_groups.tsv")));
  CHECK(info.stats.ring_count == 3);
  CHECK(info.stats.carbon_count == 20);
  CHECK(info.stats.stereo_char_count == 0);
  bool thioester = false, aryl_f = false;
  for (const auto& g : info.groups) {
    if (g.name == "thioester") thioester = std::find(g.matched_atom_maps.begin(), g.matched_atom_maps.end(), 6) !=
                                           g.matched_atom_maps.end();
    if (g.name == "aryl fluoride") aryl_f = g.matched_atom_maps == std::vector<int>{22, 23};
  }
  CHECK(thioester);
  CHECK(aryl_f);
}

TEST_CASE("stereo characters are counted from the written SMILES") {
  CHECK(product_stats(chem::parse_smiles("C[C@H](N)C(=O)O")).stereo_char_count == 1);
  CHECK(product_stats(chem::parse_smiles("C[C@@H](N)C/C=C/C")).stereo_char_count == 4);
}
