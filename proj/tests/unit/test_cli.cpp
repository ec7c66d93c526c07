#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "retrokit/cli/config.hpp"
#include "retrokit/cli/io.hpp"
#include "retrokit/errors.hpp"
#include "support/oracles.hpp"
#include "support/worked_example.hpp"

using namespace retrokit;
using namespace retrokit::cli;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / ("retrokit_test_" + name);
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("environment variable names") {
  CHECK(RunConfig::env_name("generation.temperature") == "RETROKIT_GENERATION_TEMPERATURE");
  CHECK(RunConfig::env_name("queue.per_consumer_concurrency") == "RETROKIT_QUEUE_PER_CONSUMER_CONCURRENCY");
}

TEST_CASE("flags beat env beat file beat defaults") {
  const auto path = write_temp("cfg.toml", "[generation]\ntemperature = 0.5\nmax_tokens = 100\nmodel = \"m\"\n");
  RunConfig c;
  c.load_file(path);
  c.set_default("generation.temperature", "0.8");
  c.set_default("generation.max_tokens", "500");
  c.set_default("queue.consumers", "2");
  CHECK(c.get_double("generation.temperature", 0) == 0.5);
  CHECK(c.source("generation.temperature") == "file");
  CHECK(c.get_long("queue.consumers", 0) == 2);
  CHECK(c.source("queue.consumers") == "default");
  CHECK(c.get_or("generation.model", "") == "m");

  ::setenv("RETROKIT_GENERATION_TEMPERATURE", "0.3", 1);
  ::setenv("RETROKIT_QUEUE_CONSUMERS", "3", 1);
  CHECK(c.get_double("generation.temperature", 0) == 0.3);
  CHECK(c.source("generation.temperature") == "env");
  CHECK(c.get_long("queue.consumers", 0) == 3);

  c.set_flag("generation.temperature", "0.1");
  CHECK(c.get_double("generation.temperature", 0) == 0.1);
  CHECK(c.source("generation.temperature") == "flag");
  ::unsetenv("RETROKIT_GENERATION_TEMPERATURE");
  ::unsetenv("RETROKIT_QUEUE_CONSUMERS");

  CHECK(c.source("nothing.here") == "unset");
  CHECK_FALSE(c.get("nothing.here").has_value());
  CHECK(c.get_long("generation.max_tokens", 0) == 100);
  const auto r = c.resolved();
  CHECK(r.contains("generation.temperature"));
  std::filesystem::remove(path);
}

TEST_CASE("secrets stay out of the resolved view") {
  RunConfig c;
  c.set_flag("gen.api_key", "sk-123");
  c.set_flag("gen.endpoint", "http://x");
  const auto dump = c.resolved().dump();
  CHECK(dump.find("sk-123") == std::string::npos);
  CHECK(dump.find("http://x") != std::string::npos);
}

TEST_CASE("bad values and files") {
  RunConfig c;
  c.set_flag("a.b", "abc");
  CHECK_THROWS_AS(c.get_double("a.b", 0), Error);
  CHECK_THROWS_AS(c.load_file("/nonexistent/cfg.toml"), Error);
}

TEST_CASE("shipped configuration loads") {
  RunConfig c;
  c.load_file(oracle::data_path("gen.toml"));
  CHECK(c.get_double("generation.temperature", 0) == 0.8);
  CHECK(c.get_long("queue.capacity", 0) == 5000);
  CHECK(c.get_or("run.patterns", "") == "functional_groups.tsv");
}

TEST_CASE("sha256 of a file") {
  const auto path = write_temp("abc.txt", "abc");
  CHECK(sha256_file(path) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(sha256_file(path), Error);
}

TEST_CASE("reaction records from text and JSONL") {
  const auto txt = write_temp("r.rxn", std::string("# comment\n\n") + fixture::kWorkedRxn + "\tex-1\tthio\n" +
                                           "[CH3:1][OH:2]>>[CH3:1][O:2]C\n");
  const auto recs = read_reaction_records(txt);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].id == "ex-1");
  CHECK(recs[0].rxn == fixture::kWorkedRxn);
  CHECK(recs[1].id.rfind("line-", 0) == 0);
  const auto js = write_temp("r.jsonl", std::string("{\"id\": \"j\", \"rxn\": \"CCO>>CC=O\"}\n"));
  const auto jrecs = read_reaction_records(js);
  REQUIRE(jrecs.size() == 1);
  CHECK(jrecs[0].id == "j");
  std::filesystem::remove(txt);
  std::filesystem::remove(js);
}

TEST_CASE("ingest validates, dedupes and flags") {
  const std::vector<gen::InputRecord> in = {
      {"ex", fixture::kWorkedRxn},
      {"dup", fixture::kWorkedRxn},
      {"alt", "[CH3:1][CH2:2][CH2:3][C:4](=[O:5])O.[SH:6][CH:7]1[CH2:8][CH2:9][N:10]([CH:11]([C:12](=[O:13])"
              "[CH:14]2[CH2:15][CH2:16]2)[c:17]2[cH:18][cH:19][cH:20][cH:21][c:22]2[F:23])[CH2:24][CH2:25]1>>"
              "[CH3:1][CH2:2][CH2:3][C:4](=[O:5])[S:6][CH:7]1[CH2:8][CH2:9][N:10]([CH:11]([C:12](=[O:13])"
              "[CH:14]2[CH2:15][CH2:16]2)[c:17]2[cH:18][cH:19][cH:20][cH:21][c:22]2[F:23])[CH2:24][CH2:25]1"},
      {"syntax", "C1CC>>CC"},
      {"valence", "[CH3:1][C:2]([CH3:3])([CH3:4])([CH3:5])[CH3:6]>>[CH3:1][CH3:6]"},
      {"unmapped", "CCO>>CC=O"},
  };
  const auto res = ingest(in);
  CHECK(res.lines == 6);
  CHECK(res.duplicates == 1);
  REQUIRE(res.records.size() == 2);
  CHECK(res.records[0].multi_label);
  CHECK(res.records[1].multi_label);
  CHECK(res.multi_label == 2);
  REQUIRE(res.drops.size() == 3);
  CHECK(res.drops[0].reason == "SyntaxError");
  CHECK(res.drops[0].line == 4);
  CHECK(res.drops[1].reason == "ValenceError");
  CHECK(res.drops[2].reason == "MappingError");
  const auto single = ingest({{"ex", fixture::kWorkedRxn}});
  REQUIRE(single.records.size() == 1);
  CHECK_FALSE(single.records[0].multi_label);
  CHECK(to_json(single.records[0])["id"] == "ex");
}
