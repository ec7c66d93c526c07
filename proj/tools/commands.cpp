#include "commands.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include <spdlog/spdlog.h>

#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/reaction.hpp"
#include "retrokit/chem/smiles.hpp"
#include "retrokit/cli/io.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/eval/histogram.hpp"
#include "retrokit/eval/judge.hpp"
#include "retrokit/eval/metrics.hpp"
#include "retrokit/eval/rarity.hpp"
#include "retrokit/gen/http_client.hpp"
#include "retrokit/gen/pipeline.hpp"
#include "retrokit/rationale/record.hpp"
#include "retrokit/retro/consistency.hpp"
#include "retrokit/retro/template.hpp"
#include "retrokit/rlvr/reward.hpp"

namespace retro_tool {

using namespace retrokit;

namespace {

// Keeps option storage alive for the lifetime of the parsed app.
template <class T>
std::shared_ptr<T> store() {
  return std::make_shared<T>();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

// ---------------------------------------------------------------- canon

Command canon_command(CLI::App& app) {
  auto in = store<std::string>();
  auto* sub = app.add_subcommand("canon", "Print the canonical SMILES of each input molecule");
  sub->add_option("--in", *in, "File with one SMILES per line");
  sub->footer("Positional arguments are read as SMILES strings.");
  // Positionals are taken raw: a CLI11 vector option would split "[NH4+]".
  sub->allow_extras();
  return {sub, [=](Globals&) {
            auto inputs = sub->remaining();
            if (!in->empty()) {
              for (auto& l : read_lines(*in)) {
                if (!l.empty()) inputs.push_back(l);
              }
            }
            if (inputs.empty()) throw CLI::ValidationError("canon", "no SMILES given");
            std::size_t failed = 0;
            for (const auto& s : inputs) {
              try {
                std::cout << chem::canonical_smiles(chem::parse_smiles(s)) << '\n';
              } catch (const Error& e) {
                ++failed;
                std::cout << '\n';
                spdlog::error("{}: {}", s, e.what());
              }
            }
            if (failed == 0) return kOk;
            return failed == inputs.size() ? kFatal : kPartial;
          }};
}

// ---------------------------------------------------------------- ingest

json consistency_json(const retro::ConsistencyReport& c) {
  json failures = json::array();
  for (const auto& f : c.failures) failures.push_back({{"id", f.id}, {"stage", f.stage}, {"detail", f.detail}});
  return {{"reactions", c.reactions},
          {"extracted", c.extracted},
          {"regenerated", c.regenerated},
          {"rate", c.rate()},
          {"failures", failures}};
}

Command ingest_command(CLI::App& app) {
  auto in = store<std::string>();
  auto out = store<std::string>();
  auto report = store<std::string>();
  auto* sub = app.add_subcommand("ingest", "Parse, validate and deduplicate raw reactions");
  sub->add_option("--in", *in, "Reaction file (rxn[TAB]id lines or JSONL)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", *out, "Dataset JSONL (stdout when omitted)");
  sub->add_option("--report", *report, "Ingestion report JSON (stderr when omitted)");
  return {sub, [=](Globals& g) {
            const auto res = cli::ingest(cli::read_reaction_records(*in));
            Output o(*out);
            for (const auto& r : res.records) o.stream() << cli::to_json(r).dump() << '\n';
            json rep = report_header("ingest", g, {*in});
            std::map<std::string, long> reasons;
            json drops = json::array();
            for (const auto& d : res.drops) {
              ++reasons[d.reason];
              drops.push_back({{"id", d.id}, {"line", d.line}, {"reason", d.reason}, {"detail", d.detail}});
              spdlog::warn("dropped {} ({}): {}", d.id, d.reason, d.detail);
            }
            rep["counts"] = {{"records_in", res.lines},
                             {"records_out", res.records.size()},
                             {"duplicates", res.duplicates},
                             {"multi_label", res.multi_label},
                             {"dropped", res.drops.size()},
                             {"drop_reasons", reasons}};
            rep["drops"] = drops;
            std::vector<std::pair<std::string, std::string>> kept;
            for (const auto& r : res.records) kept.emplace_back(r.id, r.rxn);
            const auto consistency = retro::check_self_consistency(kept);
            rep["template_self_consistency"] = consistency_json(consistency);
            write_report(rep, *report);
            if (!consistency.failures.empty()) {
              spdlog::warn("{} records fail template self-consistency", consistency.failures.size());
            }
            spdlog::info("ingest: {} in, {} out, {} dropped", res.lines, res.records.size(), res.drops.size());
            return kOk;
          }};
}

// ---------------------------------------------------------------- extract

Command extract_command(CLI::App& app) {
  auto in = store<std::string>();
  auto out = store<std::string>();
  auto report = store<std::string>();
  auto* sub = app.add_subcommand("extract", "Extract instance and canonical reaction templates");
  sub->add_option("--in", *in, "Reactions (JSONL or rxn lines)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", *out, "Template JSONL (stdout when omitted)");
  sub->add_option("--report", *report, "Self-consistency report: each template applied to its own precursors");
  return {sub, [=](Globals& g) {
            Output o(*out);
            std::size_t dropped = 0;
            const auto records = cli::read_reaction_records(*in);
            for (const auto& rec : records) {
              try {
                const auto t = retro::extract_template(chem::bind_atom_maps(chem::parse_rxn(rec.rxn, rec.id)));
                o.stream() << json{{"id", rec.id}, {"instance", t.instance_form}, {"canonical", t.canonical_form}}.dump()
                           << '\n';
              } catch (const Error& e) {
                ++dropped;
                spdlog::warn("{}: {}", rec.id, e.what());
              }
            }
            spdlog::info("extract: {} templates, {} dropped", records.size() - dropped, dropped);
            if (!report->empty()) {
              std::vector<std::pair<std::string, std::string>> pairs;
              for (const auto& rec : records) pairs.emplace_back(rec.id, rec.rxn);
              const auto c = retro::check_self_consistency(pairs);
              json rep = report_header("extract", g, {*in});
              rep["template_self_consistency"] = consistency_json(c);
              write_report(rep, *report);
              spdlog::info("self-consistency: {}/{} templates regenerate their product", c.regenerated, c.extracted);
            }
            return dropped == 0 ? kOk : kPartial;
          }};
}

// ---------------------------------------------------------------- rationale

Command rationale_command(CLI::App& app) {
  auto in = store<std::string>();
  auto out = store<std::string>();
  auto text = store<bool>();
  auto* sub = app.add_subcommand("rationale", "Build structured R1-R4 rationales");
  sub->add_option("--in", *in, "Reactions (JSONL or rxn lines)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", *out, "Rationale JSONL (stdout when omitted)");
  sub->add_flag("--text", *text, "Write the tagged text form instead of JSONL");
  return {sub, [=](Globals& g) {
            const auto patterns = load_patterns(g);
            Output o(*out);
            std::size_t dropped = 0;
            for (const auto& rec : cli::read_reaction_records(*in)) {
              try {
                const auto r = rationale::build_rationale(chem::bind_atom_maps(chem::parse_rxn(rec.rxn, rec.id)),
                                                          patterns);
                if (*text) {
                  o.stream() << "# " << rec.id << '\n' << rationale::render(r) << '\n';
                } else {
                  o.stream() << rationale::record_json(rec.id, rec.rxn, r, {}).dump() << '\n';
                }
              } catch (const Error& e) {
                ++dropped;
                spdlog::warn("{}: {}", rec.id, e.what());
              }
            }
            return dropped == 0 ? kOk : kPartial;
          }};
}

// ---------------------------------------------------------------- generate

gen::GenConfig gen_config(const cli::RunConfig& c) {
  gen::GenConfig cfg;
  cfg.model = c.get_or("generation.model", cfg.model);
  cfg.temperature = c.get_double("generation.temperature", cfg.temperature);
  cfg.max_tokens = static_cast<int>(c.get_long("generation.max_tokens", cfg.max_tokens));
  cfg.presence_penalty = c.get_double("generation.presence_penalty", cfg.presence_penalty);
  cfg.frequency_penalty = c.get_double("generation.frequency_penalty", cfg.frequency_penalty);
  cfg.variants_per_instance = static_cast<int>(c.get_long("generation.variants_per_instance", cfg.variants_per_instance));
  cfg.queue_capacity = static_cast<int>(c.get_long("queue.capacity", cfg.queue_capacity));
  cfg.consumers = static_cast<int>(c.get_long("queue.consumers", cfg.consumers));
  cfg.per_consumer_concurrency =
      static_cast<int>(c.get_long("queue.per_consumer_concurrency", cfg.per_consumer_concurrency));
  gen::validate(cfg);
  return cfg;
}

Command generate_command(CLI::App& app) {
  auto in = store<std::string>();
  auto out = store<std::string>();
  auto report = store<std::string>();
  auto offline = store<bool>();
  auto n = store<std::optional<int>>();
  auto* sub = app.add_subcommand("generate", "Generate linking texts for rationales");
  sub->add_option("--in", *in, "Reactions (JSONL or rxn lines)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", *out, "Rationale JSONL with links")->required();
  sub->add_option("--report", *report, "Run report JSON (stderr when omitted)");
  sub->add_flag("--offline", *offline, "Use the built-in deterministic filler instead of a service");
  sub->add_option("--n", *n, "Variants per instance");
  return {sub, [=](Globals& g) {
            if (*n) g.config.set_flag("generation.variants_per_instance", std::to_string(**n));
            const gen::GenConfig cfg = gen_config(g.config);
            std::unique_ptr<gen::TextGenerator> generator;
            if (*offline) {
              generator = std::make_unique<gen::DeterministicFiller>(static_cast<std::uint64_t>(g.seed));
            } else {
              auto endpoint = gen::endpoint_from_env("RETROKIT_GEN");
              if (endpoint.url.empty()) endpoint.url = g.config.get_or("generation.endpoint", "");
              if (endpoint.url.empty()) throw Error("no generation endpoint: set RETROKIT_GEN_ENDPOINT or use --offline");
              generator = std::make_unique<gen::HttpChatGenerator>(endpoint);
            }
            const auto records = cli::read_reaction_records(*in);
            const std::string checkpoint = *out + ".checkpoint.jsonl";
            gen::PipelineOptions options;
            options.patterns = load_patterns(g);
            for (const auto& v : gen::read_checkpoint(checkpoint)) options.done.insert({v.id, v.variant});
            if (!options.done.empty()) spdlog::info("resuming: {} variants already in {}", options.done.size(), checkpoint);

            gen::JsonlCheckpointSink sink(checkpoint);
            const gen::GenReport rep = gen::run_pipeline(records, cfg, *generator, sink, options);

            std::map<std::string, std::map<int, rationale::Links>> links;
            for (auto& v : gen::read_checkpoint(checkpoint)) links[v.id][v.variant] = v.links;
            Output o(*out);
            std::size_t written = 0;
            for (const auto& rec : records) {
              const auto it = links.find(rec.id);
              if (it == links.end()) continue;
              try {
                const auto r = rationale::build_rationale(chem::bind_atom_maps(chem::parse_rxn(rec.rxn, rec.id)),
                                                          options.patterns);
                std::vector<rationale::Links> ls;
                for (const auto& [variant, l] : it->second) ls.push_back(l);
                o.stream() << rationale::record_json(rec.id, rec.rxn, r, ls).dump() << '\n';
                ++written;
              } catch (const Error& e) {
                spdlog::warn("{}: {}", rec.id, e.what());
              }
            }
            json j = report_header("generate", g, {*in});
            j["offline"] = *offline;
            j["report"] = {{"records_in", rep.records_in},
                           {"dropped_mapping_failure", rep.dropped_mapping_failure},
                           {"produced", rep.produced},
                           {"completed", rep.completed},
                           {"dropped_truncation", rep.dropped_truncation},
                           {"dropped_error", rep.dropped_error},
                           {"skipped_from_checkpoint", rep.skipped_from_checkpoint},
                           {"in_flight_at_end", rep.in_flight_at_end},
                           {"max_queue_depth", rep.max_queue_depth},
                           {"max_in_flight", rep.max_in_flight},
                           {"max_in_flight_per_consumer", rep.max_in_flight_per_consumer},
                           {"seconds", rep.seconds},
                           {"throughput", rep.throughput}};
            j["records_written"] = written;
            write_report(j, *report);
            spdlog::info("generate: {} variants completed, {} records written", rep.completed, written);
            const bool partial = rep.dropped_mapping_failure + rep.dropped_truncation + rep.dropped_error > 0;
            return partial ? kPartial : kOk;
          }};
}

// ---------------------------------------------------------------- eval

json metrics_json(const eval::MetricsReport& m) {
  return {{"k", m.k},
          {"exact_at_1", m.exact_at_1},
          {"roundtrip_at_1", m.roundtrip_at_1},
          {"exact_at_k", m.exact_at_k},
          {"roundtrip_at_k", m.roundtrip_at_k},
          {"feasible_ratio", m.feasible_ratio},
          {"template_diversity", m.template_diversity},
          {"invalid_ratio", m.invalid_ratio},
          {"instances", m.per_instance.size()}};
}

Command eval_command(CLI::App& app) {
  auto samples = store<std::string>();
  auto oracle = store<std::string>();
  auto corpus = store<std::string>();
  auto k = store<std::optional<int>>();
  auto out = store<std::string>();
  auto csv = store<std::string>();
  auto cache_path = store<std::string>();
  auto serial = store<bool>();
  *oracle = "template";
  auto* sub = app.add_subcommand("eval", "Compute retrosynthesis metrics over sampled predictions");
  sub->add_option("--samples", *samples, "Sample JSONL")->required()->check(CLI::ExistingFile);
  sub->add_option("--oracle", *oracle, "Forward model: template or service")
      ->check(CLI::IsMember({"template", "service"}));
  sub->add_option("--corpus", *corpus, "Reactions whose templates form the template oracle");
  sub->add_option("--k", *k, "Samples per instance (default: the smallest sample count)");
  sub->add_option("--out", *out, "Report JSON (stdout when omitted)");
  sub->add_option("--csv", *csv, "Per-instance CSV");
  sub->add_option("--cache", *cache_path, "Verifier cache JSONL");
  sub->add_flag("--serial", *serial, "Evaluate instances one at a time");
  return {sub, [=](Globals& g) {
            const std::string corpus_path = corpus->empty() ? default_data("desk_corpus.rxn") : *corpus;
            const auto sets = cli::read_sample_sets(*samples);
            if (sets.empty()) throw Error("no sample sets in " + *samples);
            int depth = 0;
            if (*k) {
              depth = **k;
            } else {
              depth = static_cast<int>(sets.front().samples.size());
              for (const auto& s : sets) depth = std::min(depth, static_cast<int>(s.samples.size()));
            }
            auto fwd = make_forward_model(*oracle, corpus_path, g);
            auto cache = cache_path->empty() ? std::make_unique<rlvr::VerifierCache>()
                                             : std::make_unique<rlvr::VerifierCache>(*cache_path);
            const auto m = *serial ? eval::compute_metrics_serial(sets, *fwd, cache.get(), depth)
                                   : eval::compute_metrics(sets, *fwd, cache.get(), depth);
            json rep = report_header("eval", g, {*samples, *oracle == "template" ? corpus_path : ""});
            rep["oracle"] = *oracle;
            rep["metrics"] = metrics_json(m);
            Output o(*out);
            o.stream() << rep.dump(2) << '\n';
            if (!csv->empty()) {
              Output c(*csv);
              c.stream() << "id,exact_at_1,roundtrip_at_1,exact_at_k,roundtrip_at_k,feasible,invalid,distinct_templates\n";
              for (const auto& p : m.per_instance) {
                c.stream() << p.id << ',' << p.exact_at_1 << ',' << p.roundtrip_at_1 << ',' << p.exact_at_k << ','
                           << p.roundtrip_at_k << ',' << p.feasible << ',' << p.invalid << ',' << p.distinct_templates
                           << '\n';
              }
            }
            return kOk;
          }};
}

// ---------------------------------------------------------------- hardset

std::vector<eval::CorpusEntry> corpus_entries(const std::string& path) {
  std::vector<eval::CorpusEntry> out;
  for (const auto& rec : cli::read_reaction_records(path)) {
    try {
      const auto mapped = chem::bind_atom_maps(chem::parse_rxn(rec.rxn, rec.id));
      eval::CorpusEntry e{rec.id, chem::canonical_smiles(mapped.product()), {}};
      try {
        e.template_form = retro::extract_template(mapped).canonical_form;
      } catch (const Error&) {
      }
      out.push_back(std::move(e));
    } catch (const Error& e) {
      spdlog::warn("{}: {}", rec.id, e.what());
    }
  }
  return out;
}

Command hardset_command(CLI::App& app) {
  auto corpus = store<std::string>();
  auto pool = store<std::string>();
  auto size = store<std::size_t>();
  auto out = store<std::string>();
  auto histograms = store<std::string>();
  *size = 100;
  auto* sub = app.add_subcommand("hardset", "Select rare-template and rare-token evaluation subsets");
  sub->add_option("--corpus", *corpus, "Reactions used for frequencies")->required()->check(CLI::ExistingFile);
  sub->add_option("--pool", *pool, "Candidate reactions (default: the corpus)")->check(CLI::ExistingFile);
  sub->add_option("--size", *size, "Instances per hard set");
  sub->add_option("--out", *out, "Selection JSON (stdout when omitted)");
  sub->add_option("--histograms", *histograms, "Directory for frequency CSV and SVG files");
  return {sub, [=](Globals& g) {
            const auto corpus_set = corpus_entries(*corpus);
            const auto pool_set = pool->empty() ? corpus_set : corpus_entries(*pool);
            json rep = report_header("hardset", g, {*corpus, *pool});
            if (!histograms->empty()) {
              std::vector<std::string> products, templates;
              for (const auto& e : corpus_set) {
                products.push_back(e.product);
                if (!e.template_form.empty()) templates.push_back(e.template_form);
              }
              rep["histograms"] = eval::emit_histograms(*histograms, products, templates);
            }
            int code = kOk;
            try {
              const auto h = eval::build_hardsets(corpus_set, pool_set,
                                                  {*size, static_cast<std::uint64_t>(g.seed)});
              rep["rare_template"] = {{"frequency_1_3", h.rare_template_low}, {"frequency_4_6", h.rare_template_mid}};
              rep["rare_token"] = {{"top_2gram", h.rare_token_2gram}, {"top_3gram", h.rare_token_3gram}};
            } catch (const InsufficientPool& e) {
              spdlog::error("{}", e.what());
              rep["error"] = e.what();
              code = kPartial;
            }
            Output o(*out);
            o.stream() << rep.dump(2) << '\n';
            return code;
          }};
}

// ---------------------------------------------------------------- reward

Command reward_command(CLI::App& app) {
  auto product = store<std::string>();
  auto candidates = store<std::vector<std::string>>();
  auto label = store<std::string>();
  auto oracle = store<std::string>();
  auto corpus = store<std::string>();
  *oracle = "template";
  auto* sub = app.add_subcommand("reward", "Score candidate reactant sets for one product");
  sub->add_option("--product", *product, "Product SMILES")->required();
  sub->add_option("--reactants", *candidates, "Candidate reactant SMILES (one group member each)")
      ->required()
      ->allow_extra_args(false);
  sub->add_option("--label", *label, "Labeled reactants for the exact-match reward");
  sub->add_option("--oracle", *oracle, "Forward model: template or service")
      ->check(CLI::IsMember({"template", "service"}));
  sub->add_option("--corpus", *corpus, "Reactions whose templates form the template oracle");
  return {sub, [=](Globals& g) {
            const std::string corpus_path = corpus->empty() ? default_data("desk_corpus.rxn") : *corpus;
            auto fwd = make_forward_model(*oracle, corpus_path, g);
            rlvr::VerifierCache cache;
            const auto target = chem::parse_smiles(*product);
            std::vector<double> rewards;
            json rows = json::array();
            for (const auto& c : *candidates) {
              const int rt = rlvr::roundtrip_reward(target, c, *fwd, &cache);
              rewards.push_back(rt);
              json row = {{"reactants", c}, {"roundtrip", rt}};
              if (!label->empty()) row["exact"] = rlvr::exact_reward(*label, c);
              rows.push_back(row);
            }
            const auto adv = rlvr::group_advantages(rewards);
            for (std::size_t i = 0; i < rows.size(); ++i) rows[i]["advantage"] = adv[i];
            json rep = report_header("reward", g, {});
            rep["product"] = *product;
            rep["candidates"] = rows;
            std::cout << rep.dump(2) << '\n';
            return kOk;
          }};
}

// ---------------------------------------------------------------- judge

Command judge_command(CLI::App& app) {
  auto pairs = store<std::string>();
  auto prompt = store<std::string>();
  auto out = store<std::string>();
  auto* sub = app.add_subcommand("judge", "Order-swapped pairwise judging of reasoning texts");
  sub->add_option("--pairs", *pairs, "JSONL {id, product, model_a, model_b, reasoning_a, reasoning_b}")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--prompt", *prompt, "Judge prompt template");
  sub->add_option("--out", *out, "Tally JSON (stdout when omitted)");
  return {sub, [=](Globals& g) {
            auto endpoint = gen::endpoint_from_env("RETROKIT_JUDGE");
            if (endpoint.url.empty()) endpoint.url = g.config.get_or("judge.endpoint", "");
            if (endpoint.url.empty()) throw Error("judge needs RETROKIT_JUDGE_ENDPOINT");
            const std::string prompt_path = prompt->empty() ? default_data("judge_prompt.txt") : *prompt;
            std::string text;
            for (const auto& l : read_lines(prompt_path)) text += l + "\n";
            gen::GenConfig cfg;
            cfg.model = g.config.get_or("judge.model", "gpt-oss-120b");
            cfg.temperature = g.config.get_double("judge.temperature", 0.0);
            cfg.max_tokens = static_cast<int>(g.config.get_long("judge.max_tokens", 2000));
            eval::ChatJudge judge(std::make_shared<gen::HttpChatGenerator>(endpoint), cfg, text);
            std::vector<eval::JudgePair> input;
            for (const auto& l : read_lines(*pairs)) {
              if (l.find_first_not_of(" \t\r") == std::string::npos) continue;
              const json j = json::parse(l);
              input.push_back({j.value("id", ""), j.at("product").get<std::string>(), j.at("model_a").get<std::string>(),
                               j.at("model_b").get<std::string>(), j.at("reasoning_a").get<std::string>(),
                               j.at("reasoning_b").get<std::string>()});
            }
            json rep = report_header("judge", g, {*pairs, prompt_path});
            json tallies = json::array();
            long errors = 0;
            for (const auto& [models, t] : eval::judge_winrate(input, judge)) {
              tallies.push_back({{"model_a", models.first},
                                 {"model_b", models.second},
                                 {"a_wins", t.a_wins},
                                 {"b_wins", t.b_wins},
                                 {"ties", t.ties},
                                 {"discarded", t.discarded},
                                 {"errors", t.errors}});
              errors += t.errors;
            }
            rep["tallies"] = tallies;
            Output o(*out);
            o.stream() << rep.dump(2) << '\n';
            return errors == 0 ? kOk : kPartial;
          }};
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
  return {canon_command(app),  ingest_command(app),  extract_command(app), rationale_command(app),
          generate_command(app), eval_command(app), hardset_command(app), reward_command(app),
          judge_command(app)};
}

}  // namespace retro_tool
