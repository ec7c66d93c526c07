// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/reaction.hpp"
#include "retrokit/chem/smiles.hpp"
#include "retrokit/cli/io.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/eval/metrics.hpp"
#include "retrokit/eval/rarity.hpp"
#include "retrokit/gen/pipeline.hpp"
#include "retrokit/rationale/rationale.hpp"
#include "retrokit/retro/consistency.hpp"
#include "retrokit/retro/diff.hpp"
#include "retrokit/retro/forward.hpp"
#include "retrokit/retro/synthon.hpp"
#include "retrokit/retro/template.hpp"
#include "retrokit/rlvr/forward_model.hpp"
#include "retrokit/rlvr/reward.hpp"
#include "support/oracles.hpp"
#include "support/random_rationale.hpp"
#include "support/synthetic_corpus.hpp"
#include "support/worked_example.hpp"

using namespace retrokit;
using Clock = std::chrono::steady_clock;

namespace {

/// Collects failed expectations for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::string note;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  bool passed() const { return failures.empty(); }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string canon(const std::string& s) { return chem::canonical_smiles(chem::parse_smiles(s)); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::vector<gen::InputRecord> desk_corpus() { return cli::read_reaction_records(oracle::data_path("desk_corpus.rxn")); }

const std::vector<perception::PatternDef>& patterns() {
  static const auto p = perception::load_pattern_table(oracle::data_path("functional_groups.tsv"));
  return p;
}

// ------------------------------------------------------------------------

void worked_example(Check& c) {
  const auto t0 = Clock::now();
  const auto mr = chem::bind_atom_maps(chem::parse_rxn(fixture::kWorkedRxn));
  const auto t = retro::extract_template(mr);
  const auto d = retro::identify_disconnections(mr);
  c.expect(d.size() == 1, "expected exactly one formed bond");
  if (d.empty()) return;
  const auto split = retro::make_synthons(mr.product(), d[0]);
  const auto eq = retro::map_equivalents(mr, split.synthons);
  const double elapsed = seconds_since(t0);

  c.expect(t.instance_form == fixture::kInstanceTemplate, "instance template " + t.instance_form);
  c.expect(t.canonical_form == fixture::kCanonicalTemplate, "canonical template " + t.canonical_form);
  c.expect(std::minmax(d[0].map_a, d[0].map_b) == std::minmax(4, 6), "disconnection maps");
  c.expect(d[0].order == chem::BondOrder::Single, "disconnection order");

  const std::map<std::string, std::string> expected_pairs = {{fixture::kSynthonAcyl, fixture::kAcylChloride},
                                                             {fixture::kSynthonThiol, fixture::kThiol}};
  c.expect(split.synthons.size() == 2, "two synthons");
  for (const auto& [syn, reactant] : expected_pairs) {
    const auto want = chem::parse_smiles(syn);
    bool found_syn = false;
    for (const auto& s : split.synthons) {
      if (s.smiles == canon(syn) && oracle::brute_isomorphic(chem::parse_smiles(s.smiles), want)) found_syn = true;
    }
    c.expect(found_syn, "synthon " + syn);
    bool found_pair = false;
    for (const auto& p : eq.pairs) {
      if (p.synthon.smiles != canon(syn)) continue;
      found_pair = p.smiles == canon(reactant) &&
                   oracle::brute_isomorphic(chem::parse_smiles(p.smiles), chem::parse_smiles(reactant));
    }
    c.expect(found_pair, "equivalent " + syn + " => " + reactant);
  }
  c.expect(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
  c.note = fmt(elapsed) + " s";
}

void template_self_consistency(Check& c) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& r : desk_corpus()) pairs.emplace_back(r.id, r.rxn);
  const auto rep = retro::check_self_consistency(pairs);
  for (const auto& f : rep.failures) std::cout << "    " << f.id << " [" << f.stage << "] " << f.detail << '\n';
  c.expect(rep.reactions == 200, "corpus has " + std::to_string(rep.reactions) + " reactions");
  c.expect(rep.extracted > 0 && rep.rate() >= 0.95, "rate " + fmt(rep.rate()));
  c.note = std::to_string(rep.regenerated) + "/" + std::to_string(rep.extracted) + " regenerate, " +
           std::to_string(rep.failures.size()) + " failures itemized";
}

void canonicalization(Check& c) {
  std::vector<chem::Molecule> mols;
  std::vector<std::string> keys;
  for (const auto& s : oracle::read_smiles_fixture("small_molecules.smi")) {
    auto m = chem::parse_smiles(s);
    c.expect(m.num_atoms() <= 8, "fixture molecule over 8 atoms: " + s);
    keys.push_back(chem::canonical_smiles(m));
    mols.push_back(std::move(m));
  }
  long discordant = 0, pairs = 0;
  for (std::size_t i = 0; i < mols.size(); ++i) {
    for (std::size_t j = i + 1; j < mols.size(); ++j) {
      ++pairs;
      if ((keys[i] == keys[j]) != oracle::brute_isomorphic(mols[i], mols[j])) ++discordant;
    }
  }
  c.expect(discordant == 0, std::to_string(discordant) + " discordant pairs");
  std::mt19937_64 rng(2024);
  long variant = 0;
  for (std::size_t i = 0; i < mols.size(); ++i) {
    for (int k = 0; k < 100; ++k) {
      const auto p = oracle::random_permutation(mols[i].num_atoms(), rng);
      if (chem::canonical_smiles(oracle::permuted(mols[i], p, rng)) != keys[i]) ++variant;
    }
  }
  c.expect(variant == 0, std::to_string(variant) + " permutations changed the canonical string");
  c.note = std::to_string(mols.size()) + " molecules, " + std::to_string(pairs) + " pairs, " +
           std::to_string(mols.size() * 100) + " permutations";
}

// ------------------------------------------------------------------------

/// Products, labels and templates of the desk corpus. Samples are drawn from
/// a reaction's own precursors in shuffled order, other reactions' precursors,
/// partial sets and unparseable text.
struct MetricWorld {
  std::vector<std::string> products;
  std::vector<std::string> labels;
  std::vector<std::string> forms;
  std::vector<std::string> junk = {"not smiles", "C1CC", "", "CC(C"};
};

MetricWorld metric_world() {
  MetricWorld w;
  for (const auto& r : desk_corpus()) {
    const auto mr = chem::bind_atom_maps(chem::parse_rxn(r.rxn));
    std::string label;
    for (const auto& p : mr.precursors()) label += (label.empty() ? "" : ".") + chem::canonical_smiles(p);
    w.products.push_back(chem::canonical_smiles(mr.product()));
    w.labels.push_back(label);
    try {
      w.forms.push_back(retro::extract_template(mr).canonical_form);
    } catch (const Error&) {
    }
  }
  return w;
}

std::string shuffled(const std::string& label, std::mt19937_64& rng) {
  std::vector<std::string> parts;
  std::stringstream ss(label);
  std::string piece;
  while (std::getline(ss, piece, '.')) parts.push_back(piece);
  std::shuffle(parts.begin(), parts.end(), rng);
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ".") + p;
  return out;
}

void metric_equivalence(Check& c) {
  const auto w = metric_world();
  retro::TemplateLibrary library;
  for (const auto& f : w.forms) library.add(f);
  rlvr::TemplateOracle fwd(library);
  rlvr::VerifierCache cache;

  // Naive side: forward products straight from every library template, and
  // the first template that yields the product as the sample's template.
  std::map<std::pair<std::string, std::string>, std::pair<bool, std::string>> memo;
  auto naive_lookup = [&](const std::string& product, const std::string& sample) -> std::pair<bool, std::string> {
    const auto key = std::make_pair(product, sample);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::pair<bool, std::string> v{false, ""};
    bool ok = false;
    const auto ms = oracle::reactant_multiset(sample, ok);
    if (ok) {
      std::vector<chem::Molecule> reactants;
      for (const auto& s : ms) reactants.push_back(chem::parse_smiles(s));
      for (const auto& form : library.forms()) {
        for (const auto& m : retro::apply_template_forward(std::string_view(form), reactants)) {
          if (chem::canonical_smiles(m) == product) {
            v = {true, form};
            break;
          }
        }
        if (v.first) break;
      }
    }
    memo[key] = v;
    return v;
  };
  auto rt = [&](const std::string& p, const std::string& s) { return naive_lookup(p, s).first; };
  auto tmpl = [&](const std::string& p, const std::string& s) { return naive_lookup(p, s).second; };

  std::mt19937_64 rng(4242);
  double worst = 0;
  long monotone_breaks = 0;
  bool serial_agrees = true;
  for (int set = 0; set < 50; ++set) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const int K = 1 + static_cast<int>(rng() % 8);
    std::vector<eval::SampleSet> data;
    std::vector<oracle::NaiveInstance> naive;
    for (int i = 0; i < n; ++i) {
      const std::size_t r = rng() % w.products.size();
      auto draw = [&]() -> std::string {
        switch (rng() % 5) {
          case 0:
          case 1: return shuffled(w.labels[r], rng);
          case 2: return w.labels[rng() % w.labels.size()];
          case 3: {
            const auto& l = w.labels[r];
            return l.substr(0, l.find('.'));
          }
          default: return w.junk[rng() % w.junk.size()];
        }
      };
      eval::SampleSet s{"s" + std::to_string(set) + "-" + std::to_string(i), w.products[r], w.labels[r], draw(), {}};
      for (int k = 0; k < K; ++k) s.samples.push_back(draw());
      naive.push_back({s.product, s.label_reactants, s.greedy, s.samples});
      data.push_back(std::move(s));
    }
    double prev_exact = -1, prev_rt = -1;
    for (int k = 1; k <= K; ++k) {
      const auto got = eval::compute_metrics(data, fwd, &cache, k);
      const auto ser = eval::compute_metrics_serial(data, fwd, nullptr, k);
      const auto want = oracle::naive_metrics(naive, k, rt, tmpl);
      const double diffs[] = {got.exact_at_1 - want.exact_at_1,         got.roundtrip_at_1 - want.roundtrip_at_1,
                              got.exact_at_k - want.exact_at_k,         got.roundtrip_at_k - want.roundtrip_at_k,
                              got.feasible_ratio - want.feasible_ratio, got.template_diversity - want.template_diversity,
                              got.invalid_ratio - want.invalid_ratio};
      for (double d : diffs) worst = std::max(worst, std::abs(d));
      serial_agrees = serial_agrees && ser.exact_at_k == got.exact_at_k && ser.roundtrip_at_k == got.roundtrip_at_k &&
                      ser.feasible_ratio == got.feasible_ratio && ser.template_diversity == got.template_diversity &&
                      ser.invalid_ratio == got.invalid_ratio;
      if (got.exact_at_k < prev_exact || got.roundtrip_at_k < prev_rt) ++monotone_breaks;
      prev_exact = got.exact_at_k;
      prev_rt = got.roundtrip_at_k;
    }
  }
  c.expect(worst <= 1e-12, "max deviation " + fmt(worst));
  c.expect(monotone_breaks == 0, std::to_string(monotone_breaks) + " @k monotonicity breaks");
  c.expect(serial_agrees, "serial and parallel evaluation differ");

  // Hand fixture: two instances, feasible 2/4 and 4/4.
  rlvr::TemplateOracle worked(retro::TemplateLibrary({fixture::kCanonicalTemplate}));
  const std::string good = std::string(fixture::kThiol) + "." + fixture::kAcylChloride;
  const std::vector<eval::SampleSet> hand = {
      {"h1", fixture::kProduct, good, good, {good, "CCO.CC(=O)Cl", "not smiles", good}},
      {"h2", fixture::kProduct, good, good, {good, good, good, good}}};
  const auto m = eval::compute_metrics(hand, worked, nullptr, 4);
  c.expect(std::abs(m.feasible_ratio - 0.75) <= 1e-12, "hand feasible_ratio " + fmt(m.feasible_ratio));
  long feasible = 0;
  for (const auto& [key, v] : memo) feasible += v.first ? 1 : 0;
  c.expect(feasible > 0 && feasible < static_cast<long>(memo.size()), "samples are all feasible or all infeasible");
  c.note = "50 sets, " + std::to_string(feasible) + "/" + std::to_string(memo.size()) +
           " distinct samples feasible, max deviation " + fmt(worst) + ", hand feasible_ratio " + fmt(m.feasible_ratio);
}

void rlvr_math(Check& c) {
  const auto a = rlvr::group_advantages({1, 0, 0, 1});
  c.expect(a == std::vector<double>{1, -1, -1, 1}, "advantages of [1,0,0,1]");
  c.expect(rlvr::group_advantages({1, 1, 1, 1}) == std::vector<double>{0, 0, 0, 0}, "degenerate group");
  c.expect(rlvr::group_advantages({0, 0}) == std::vector<double>{0, 0}, "all-zero group");

  rlvr::TokenScores s;
  s.logp_old = {-1.0};
  s.logp_new = {-1.0 + std::log(1.5)};
  s.mask = {1};
  const double v = rlvr::clipped_objective(s, 1.0, rlvr::ClipConfig{0.2, 0.2});
  c.expect(std::abs(v - 1.2) <= 1e-12, "clipped objective " + fmt(v));
  const double neg = rlvr::clipped_objective(s, -1.0, rlvr::ClipConfig{0.2, 0.2});
  c.expect(std::abs(neg + 1.5) <= 1e-12, "clipped objective with negative advantage " + fmt(neg));

  rlvr::TokenScores t;
  t.logp_new = {-0.5, -1.5, -4.0, -2.0};
  t.logp_old = {0, 0, 0, 0};
  t.mask = {1, 1, 0, 1};
  c.expect(std::abs(rlvr::sft_loss(t) - 4.0 / 3.0) <= 1e-12, "sft loss");

  // Cache transparency: same rewards, at most one oracle call per distinct key.
  rlvr::TemplateOracle cached(retro::TemplateLibrary({fixture::kCanonicalTemplate}));
  rlvr::TemplateOracle plain(retro::TemplateLibrary({fixture::kCanonicalTemplate}));
  rlvr::VerifierCache cache;
  const auto product = chem::parse_smiles(fixture::kProduct);
  const std::vector<std::string> preds = {std::string(fixture::kThiol) + "." + fixture::kAcylChloride,
                                          std::string(fixture::kAcylChloride) + "." + fixture::kThiol,
                                          "CCO.CC(=O)Cl",
                                          "OCC.ClC(C)=O",
                                          "not smiles",
                                          "CCS.CC(=O)Cl",
                                          std::string(fixture::kThiol) + "." + fixture::kAcylChloride};
  std::set<std::string> distinct;
  bool same = true;
  for (int round = 0; round < 3; ++round) {
    for (const auto& p : preds) {
      same = same && rlvr::roundtrip_reward(product, p, cached, &cache) == rlvr::roundtrip_reward(product, p, plain, nullptr);
      try {
        distinct.insert(rlvr::reactant_key(rlvr::parse_reactants(p)));
      } catch (const Error&) {
      }
    }
  }
  c.expect(same, "cached rewards differ");
  c.expect(cached.calls() <= distinct.size(), std::to_string(cached.calls()) + " oracle calls for " +
                                                  std::to_string(distinct.size()) + " distinct keys");
  c.note = "cache: " + std::to_string(cached.calls()) + " calls for " + std::to_string(distinct.size()) + " keys";
}

void hardsets(Check& c) {
  const auto corpus = fixture::synthetic_corpus({{1, 40}, {2, 20}, {3, 15}, {4, 10}, {5, 8}, {6, 6}, {7, 4}, {12, 3}}, 31);
  const eval::HardsetConfig cfg{100, 8};
  const auto h = eval::build_hardsets(corpus, corpus, cfg);
  std::map<std::string, int> freq_of;
  std::map<std::string, int> count;
  for (const auto& e : corpus) ++count[e.template_form];
  for (const auto& e : corpus) freq_of[e.id] = count[e.template_form];
  for (const auto& id : h.rare_template_low) c.expect(freq_of[id] >= 1 && freq_of[id] <= 3, id + " not in [1,3]");
  for (const auto& id : h.rare_template_mid) c.expect(freq_of[id] >= 4 && freq_of[id] <= 6, id + " not in [4,6]");
  c.expect(h.rare_template_low.size() == 50 && h.rare_template_mid.size() == 50, "rare-template halves of 50");

  std::vector<std::string> products;
  for (const auto& e : corpus) products.push_back(e.product);
  auto ranking = [&](int n) {
    std::vector<std::pair<double, std::string>> r;
    for (const auto& e : corpus) r.push_back({-oracle::brute_rarity(products, e.product, n), e.id});
    std::sort(r.begin(), r.end());
    return r;
  };
  std::vector<std::string> want2, want3;
  for (const auto& [s, id] : ranking(2)) {
    if (want2.size() < 50) want2.push_back(id);
  }
  const std::set<std::string> taken(want2.begin(), want2.end());
  for (const auto& [s, id] : ranking(3)) {
    if (want3.size() < 50 && !taken.count(id)) want3.push_back(id);
  }
  c.expect(h.rare_token_2gram == want2, "2-gram top-50 order differs from the brute-force sort");
  c.expect(h.rare_token_3gram == want3, "3-gram top-50 order differs from the brute-force sort");

  auto dump = [](const eval::Hardsets& x) {
    return nlohmann::json{{"low", x.rare_template_low},
                          {"mid", x.rare_template_mid},
                          {"tok2", x.rare_token_2gram},
                          {"tok3", x.rare_token_3gram}}
        .dump();
  };
  c.expect(dump(h) == dump(eval::build_hardsets(corpus, corpus, cfg)), "rerun with the same seed differs");
  c.note = std::to_string(corpus.size()) + " corpus entries, 4 halves of 50";
}

// ------------------------------------------------------------------------

/// Deterministic filler that truncates one marked record and tracks how many
/// requests are open at once.
class InstrumentedFiller : public gen::TextGenerator {
 public:
  explicit InstrumentedFiller(std::string truncate_marker) : inner_(9), marker_(std::move(truncate_marker)) {}

  gen::Completion generate(const std::string& prompt, const gen::GenConfig& config) override {
    const int now = ++open_;
    int seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::microseconds(200));
    gen::Completion out;
    if (prompt.find(marker_) != std::string::npos && prompt.find("Slot: L23") != std::string::npos) {
      out = {"cut short", gen::FinishReason::Length};
    } else {
      out = inner_.generate(prompt, config);
    }
    --open_;
    return out;
  }

  int peak() const { return peak_; }

 private:
  gen::DeterministicFiller inner_;
  std::string marker_;
  std::atomic<int> open_{0};
  std::atomic<int> peak_{0};
};

void pipeline_contract(Check& c) {
  const auto corpus = desk_corpus();
  std::vector<gen::InputRecord> records(corpus.begin(), corpus.begin() + 100);
  const auto truncated = corpus[100];
  records.push_back({"inject-truncate", truncated.rxn});
  records.push_back({"inject-unmapped", "CCO.CC(=O)Cl>>CC(=O)OCC"});
  records.push_back({"inject-syntax", "C1CC(>>CC"});

  gen::GenConfig cfg;
  cfg.queue_capacity = 64;
  InstrumentedFiller filler(truncated.rxn);
  gen::MemorySink sink;
  gen::PipelineOptions options;
  options.patterns = patterns();
  std::mutex mu;
  std::map<std::pair<std::string, int>, std::vector<rationale::LinkSlot>> order;
  options.on_request = [&](const std::string& id, int v, rationale::LinkSlot s) {
    std::lock_guard lock(mu);
    order[{id, v}].push_back(s);
  };
  const auto t0 = Clock::now();
  const auto rep = gen::run_pipeline(records, cfg, filler, sink, options);
  const double elapsed = seconds_since(t0);

  c.expect(rep.completed == 1500, "completed " + std::to_string(rep.completed));
  c.expect(sink.results.size() == 1500, "sink received " + std::to_string(sink.results.size()));
  std::set<std::pair<std::string, int>> keys;
  for (const auto& v : sink.results) {
    keys.insert({v.id, v.variant});
    c.expect(!v.links.l12.empty() && !v.links.l23.empty() && !v.links.l34.empty(), "incomplete variant " + v.id);
  }
  c.expect(keys.size() == 1500, "duplicate variants");
  c.expect(rep.dropped_mapping_failure == 2, "mapping drops " + std::to_string(rep.dropped_mapping_failure));
  c.expect(rep.dropped_truncation == 15, "truncation drops " + std::to_string(rep.dropped_truncation));
  c.expect(rep.dropped_error == 0, "error drops " + std::to_string(rep.dropped_error));
  c.expect(rep.produced == rep.completed + rep.dropped_truncation + rep.dropped_error, "counter identity");
  c.expect(rep.in_flight_at_end == 0, "did not drain");
  c.expect(rep.max_queue_depth <= static_cast<std::size_t>(cfg.queue_capacity),
           "queue depth " + std::to_string(rep.max_queue_depth));
  c.expect(rep.max_in_flight_per_consumer <= cfg.per_consumer_concurrency,
           "per-consumer in flight " + std::to_string(rep.max_in_flight_per_consumer));
  c.expect(filler.peak() <= cfg.consumers * cfg.per_consumer_concurrency,
           "open requests peaked at " + std::to_string(filler.peak()));
  long misordered = 0;
  for (const auto& [key, slots] : order) {
    if (key.first == "inject-truncate") continue;
    if (slots != std::vector{rationale::LinkSlot::L12, rationale::LinkSlot::L23, rationale::LinkSlot::L34}) ++misordered;
  }
  c.expect(misordered == 0, std::to_string(misordered) + " variants with links out of order");
  c.expect(elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
  c.note = std::to_string(rep.completed) + " variants in " + fmt(elapsed) + " s, queue depth " +
           std::to_string(rep.max_queue_depth) + "/" + std::to_string(cfg.queue_capacity) + ", per-consumer " +
           std::to_string(rep.max_in_flight_per_consumer) + "/" + std::to_string(cfg.per_consumer_concurrency);
}

void rationale_round_trip(Check& c) {
  fixture::RationaleSampler sampler(1000);
  long mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto r = sampler.draw();
    const auto back = rationale::parse_output(rationale::render(r)).complete();
    if (!back || !(*back == r)) ++mismatches;
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " of 1000 rationales did not round-trip");

  long built = 0, not_all = 0;
  for (const auto& rec : desk_corpus()) {
    rationale::Rationale gold;
    try {
      gold = rationale::build_rationale(chem::bind_atom_maps(chem::parse_rxn(rec.rxn)), patterns());
    } catch (const Error&) {
      continue;
    }
    ++built;
    rationale::PartialRationale direct;
    direct.r1 = gold.r1;
    direct.r2 = gold.r2;
    direct.r3 = gold.r3;
    direct.r4 = gold.r4;
    direct.answer = gold.answer;
    if (!rationale::score_steps(direct, gold).all() ||
        !rationale::score_steps(rationale::parse_output(rationale::render(gold)), gold).all()) {
      ++not_all;
      std::cout << "    " << rec.id << " scores below all-true against itself\n";
    }
  }
  c.expect(not_all == 0, std::to_string(not_all) + " gold rationales not all-true");
  c.expect(built > 0, "no rationale built");
  c.note = "1000 round trips, " + std::to_string(built) + " corpus rationales";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"worked-example fidelity", worked_example},
      {"template self-consistency", template_self_consistency},
      {"canonicalization soundness", canonicalization},
      {"metric formula equivalence", metric_equivalence},
      {"rlvr math", rlvr_math},
      {"hard-set construction", hardsets},
      {"pipeline contract", pipeline_contract},
      {"rationale round trip", rationale_round_trip},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    const auto t0 = Clock::now();
    try {
      run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(t0);
    std::cout << (c.passed() ? "PASS" : "FAIL") << "  " << name << "  (" << fmt(elapsed) << " s)";
    if (!c.note.empty()) std::cout << "  " << c.note;
    std::cout << '\n';
    for (const auto& f : c.failures) std::cout << "    - " << f << '\n';
    if (!c.passed()) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
