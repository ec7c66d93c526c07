#include <doctest.h>

#include <atomic>
#include <mutex>

#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/reaction.hpp"
#include "retrokit/chem/smiles.hpp"
#include "retrokit/cli/io.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/rationale/rationale.hpp"
#include "retrokit/rationale/record.hpp"
#include "support/random_rationale.hpp"
#include "support/worked_example.hpp"

using namespace retrokit;
using namespace retrokit::rationale;

namespace {

const std::vector<perception::PatternDef>& patterns() {
  static const auto p = perception::load_pattern_table(oracle::data_path("functional_groups.tsv"));
  return p;
}

Rationale worked() {
  return build_rationale(chem::bind_atom_maps(chem::parse_rxn(fixture::kWorkedRxn)), patterns());
}

std::string canon(const std::string& s) { return chem::canonical_smiles(chem::parse_smiles(s)); }

/// Answers from a script: slot name -> completion, optionally per variant.
class ScriptedGenerator : public gen::TextGenerator {
 public:
  std::function<gen::Completion(const std::string&)> reply;
  std::atomic<int> calls{0};
  gen::Completion generate(const std::string& prompt, const gen::GenConfig&) override {
    ++calls;
    return reply(prompt);
  }
};

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("worked example rationale content") {
  const auto r = worked();
  CHECK(r.r1.stats.ring_count == 3);
  CHECK(r.r1.stats.carbon_count == 20);
  CHECK(r.r1.stats.stereo_char_count == 0);
  bool thioester = false;
  for (const auto& g : r.r1.groups) thioester = thioester || g.name == "thioester";
  CHECK(thioester);
  CHECK(r.r2.maps == std::vector<int>{4, 5, 6});
  CHECK(std::min(r.r3.bond.map_a, r.r3.bond.map_b) == 4);
  CHECK(std::max(r.r3.bond.map_a, r.r3.bond.map_b) == 6);
  CHECK(r.r3.bond.order == chem::BondOrder::Single);
  std::multiset<std::string> syn;
  for (const auto& s : r.r3.synthons) syn.insert(canon(s));
  CHECK(syn == std::multiset<std::string>{canon(fixture::kSynthonAcyl), canon(fixture::kSynthonThiol)});
  std::multiset<std::string> ans;
  for (const auto& a : r.answer) ans.insert(canon(a));
  CHECK(ans == std::multiset<std::string>{canon(fixture::kAcylChloride), canon(fixture::kThiol)});
}

TEST_CASE("render and parse round trip") {
  auto r = worked();
  auto back = parse_output(render(r)).complete();
  REQUIRE(back.has_value());
  CHECK(*back == r);
  r.links = {"first link", "second\nlink", "third link"};
  back = parse_output(render(r)).complete();
  REQUIRE(back.has_value());
  CHECK(*back == r);
  CHECK(score_steps(parse_output(render(r)), r).all());
}

TEST_CASE("random rationales round trip") {
  fixture::RationaleSampler sampler(11);
  for (int i = 0; i < 200; ++i) {
    const auto r = sampler.draw();
    const auto back = parse_output(render(r)).complete();
    REQUIRE(back.has_value());
    CHECK(*back == r);
  }
}

TEST_CASE("partial text keeps what it can") {
  const auto r = worked();
  const std::string text = render_block(r, 1) + "some reasoning\n" + render_block(r, 3);
  const auto p = parse_output(text);
  CHECK(p.r1.has_value());
  CHECK_FALSE(p.r2.has_value());
  CHECK(p.r3.has_value());
  CHECK_FALSE(p.r4.has_value());
  CHECK_FALSE(p.answer.has_value());
  CHECK(p.links.empty());
  CHECK_FALSE(p.complete().has_value());
  const auto s = score_steps(p, r);
  CHECK(s.atom_mapping);
  CHECK(s.disconnection);
  CHECK_FALSE(s.candidate_structure);
  CHECK_FALSE(s.equivalents);
}

TEST_CASE("score fields are independent") {
  const auto gold = worked();
  auto pred = gold;
  pred.r3.bond.map_a = 4;
  pred.r3.bond.map_b = 5;
  const auto s = score_steps(parse_output(render(pred)), gold);
  CHECK_FALSE(s.disconnection);
  CHECK(s.atom_mapping);
  CHECK(s.functional_groups);
  CHECK(s.smiles_stats);
  CHECK(s.candidate_structure);
  CHECK(s.synthons);
  CHECK(s.equivalents);

  auto swapped = gold;
  std::swap(swapped.r3.bond.map_a, swapped.r3.bond.map_b);
  std::reverse(swapped.r3.synthons.begin(), swapped.r3.synthons.end());
  CHECK(score_steps(parse_output(render(swapped)), gold).all());

  auto wrong_stats = gold;
  wrong_stats.r1.stats.carbon_count += 1;
  const auto s2 = score_steps(parse_output(render(wrong_stats)), gold);
  CHECK_FALSE(s2.smiles_stats);
  CHECK(s2.functional_groups);
  CHECK(s2.disconnection);
}

TEST_CASE("gold rationale scores all-true on the corpus") {
  int built = 0;
  for (const auto& rec : cli::read_reaction_records(oracle::data_path("desk_corpus.rxn"))) {
    Rationale r;
    try {
      r = build_rationale(chem::bind_atom_maps(chem::parse_rxn(rec.rxn)), patterns());
    } catch (const Error&) {
      continue;
    }
    ++built;
    INFO(rec.id);
    CHECK(score_steps(parse_output(render(r)), r).all());
  }
  CHECK(built > 150);
}

TEST_CASE("bond order names") {
  for (auto o : {chem::BondOrder::Single, chem::BondOrder::Double, chem::BondOrder::Triple, chem::BondOrder::Aromatic}) {
    CHECK(order_from_name(order_name(o)) == o);
  }
  CHECK_FALSE(order_from_name("quadruple").has_value());
}

TEST_CASE("link prompts grow with the slot") {
  auto r = worked();
  r.links = {"alpha", "beta", ""};
  const auto p12 = link_prompt(r, "rxn", LinkSlot::L12);
  const auto p23 = link_prompt(r, "rxn", LinkSlot::L23);
  const auto p34 = link_prompt(r, "rxn", LinkSlot::L34);
  CHECK(has(p12, "<CANDIDATE_STRUCTURE>"));
  CHECK_FALSE(has(p12, "<STRATEGIC_BOND_DISCONNECTION>"));
  CHECK(has(p23, "alpha"));
  CHECK(has(p23, "<STRATEGIC_BOND_DISCONNECTION>"));
  CHECK_FALSE(has(p23, "<SYNTHETIC_EQUIVALENT>"));
  CHECK(has(p34, "beta"));
  CHECK(has(p34, "<SYNTHETIC_EQUIVALENT>"));
}

TEST_CASE("orchestrate links with n variants") {
  const auto r = worked();
  gen::DeterministicFiller filler(3);
  gen::GenConfig cfg;
  for (int n : {1, 15}) {
    const auto out = orchestrate_links(r, fixture::kWorkedRxn, filler, cfg, n);
    REQUIRE(out.variants.size() == static_cast<std::size_t>(n));
    CHECK(out.dropped_truncation == 0);
    std::set<std::string> distinct;
    for (const auto& v : out.variants) {
      CHECK_FALSE(v.links.l12.empty());
      CHECK_FALSE(v.links.l23.empty());
      CHECK_FALSE(v.links.l34.empty());
      CHECK(v.r3 == r.r3);
      distinct.insert(v.links.l12 + v.links.l23 + v.links.l34);
    }
    if (n == 15) CHECK(distinct.size() > 1);
  }
  const auto a = orchestrate_links(r, fixture::kWorkedRxn, filler, cfg, 4);
  const auto b = orchestrate_links(r, fixture::kWorkedRxn, filler, cfg, 4);
  for (std::size_t i = 0; i < a.variants.size(); ++i) CHECK(a.variants[i].links == b.variants[i].links);
}

TEST_CASE("truncated and failing variants are dropped") {
  const auto r = worked();
  gen::GenConfig cfg;
  ScriptedGenerator g;
  g.reply = [](const std::string& prompt) -> gen::Completion {
    if (has(prompt, "Slot: L23") && has(prompt, "Variant: 1\n")) return {"cut", gen::FinishReason::Length};
    if (has(prompt, "Variant: 2\n")) return {"", gen::FinishReason::Error};
    return {"fine", gen::FinishReason::Stop};
  };
  const auto out = orchestrate_links(r, "rxn", g, cfg, 4);
  CHECK(out.variants.size() == 2);
  CHECK(out.dropped_truncation == 1);
  CHECK(out.dropped_error == 1);
}

TEST_CASE("one transport error is retried") {
  const auto r = worked();
  ScriptedGenerator g;
  std::atomic<int> failures{0};
  g.reply = [&](const std::string&) -> gen::Completion {
    if (failures++ == 0) return {"", gen::FinishReason::Error};
    return {"ok", gen::FinishReason::Stop};
  };
  std::vector<LinkSlot> order;
  const auto v = generate_variant(r, "rxn", 0, g, gen::GenConfig{}, [&](LinkSlot s) { order.push_back(s); });
  CHECK(v.status == VariantStatus::Ok);
  CHECK(g.calls == 4);
  CHECK(order == std::vector<LinkSlot>{LinkSlot::L12, LinkSlot::L12, LinkSlot::L23, LinkSlot::L34});
}

TEST_CASE("record json round trip") {
  auto r = worked();
  const auto j = to_json(r);
  CHECK(rationale_from_json(j) == r);
  CHECK(rationale_from_json(nlohmann::json::parse(j.dump())) == r);
  const Links l{"a", "b", "c"};
  CHECK(links_from_json(to_json(l)) == l);
  const auto rec = record_json("x", fixture::kWorkedRxn, r, {l, l});
  CHECK(rec["id"] == "x");
  CHECK(rec["links"].size() == 2);
  CHECK(rationale_from_json(rec) == r);
  fixture::RationaleSampler sampler(4);
  for (int i = 0; i < 50; ++i) {
    auto x = sampler.draw();
    x.links = {};
    CHECK(rationale_from_json(nlohmann::json::parse(to_json(x).dump())) == x);
  }
  CHECK_THROWS(rationale_from_json(nlohmann::json::object()));
}
