#include "common.hpp"

#include <filesystem>
#include <iostream>

#include <spdlog/spdlog.h>

#include "retrokit/chem/reaction.hpp"
#include "retrokit/cli/io.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/gen/http_client.hpp"
#include "retrokit/retro/template.hpp"

namespace retro_tool {

using namespace retrokit;

Output::Output(const std::string& path) : stdout_(&std::cout) {
  if (path.empty() || path == "-") return;
  file_.open(path);
  if (!file_) throw Error("cannot write " + path);
}

std::string default_data(const std::string& name) { return std::string(RETROKIT_DATA_DIR) + "/" + name; }

std::vector<perception::PatternDef> load_patterns(const Globals& g) {
  std::string path = g.config.get_or("run.patterns", default_data("functional_groups.tsv"));
  if (g.config.source("run.patterns") == "file" && std::filesystem::path(path).is_relative()) {
    path = (std::filesystem::path(g.config.file_path()).parent_path() / path).string();
  }
  return perception::load_pattern_table(path);
}

retro::TemplateLibrary library_from_corpus(const std::string& path) {
  retro::TemplateLibrary lib;
  std::size_t skipped = 0;
  for (const auto& rec : cli::read_reaction_records(path)) {
    try {
      lib.add(retro::extract_template(chem::bind_atom_maps(chem::parse_rxn(rec.rxn, rec.id))).canonical_form);
    } catch (const Error&) {
      ++skipped;
    }
  }
  spdlog::info("template library: {} templates from {} ({} reactions skipped)", lib.size(), path, skipped);
  return lib;
}

std::unique_ptr<rlvr::ForwardModel> make_forward_model(const std::string& oracle, const std::string& corpus,
                                                       const Globals& g) {
  if (oracle == "template") return std::make_unique<rlvr::TemplateOracle>(library_from_corpus(corpus));
  if (oracle == "service") {
    auto endpoint = gen::endpoint_from_env("RETROKIT_FORWARD");
    if (endpoint.url.empty()) endpoint.url = g.config.get_or("forward.endpoint", "");
    if (endpoint.url.empty()) throw Error("service oracle needs RETROKIT_FORWARD_ENDPOINT");
    gen::GenConfig cfg;
    cfg.model = g.config.get_or("forward.model", cfg.model);
    cfg.temperature = 0.0;
    return std::make_unique<rlvr::ServiceForwardModel>(std::make_shared<gen::HttpChatGenerator>(endpoint), cfg);
  }
  throw Error("unknown oracle '" + oracle + "' (expected template or service)");
}

json report_header(const std::string& command, const Globals& g, const std::vector<std::string>& inputs) {
  json hashes = json::object();
  for (const auto& path : inputs) {
    if (path.empty()) continue;
    hashes[path] = cli::sha256_file(path);
  }
  return {{"command", command}, {"seed", g.seed}, {"config", g.config.resolved()}, {"inputs", hashes}};
}

void write_report(const json& report, const std::string& path) {
  if (path.empty()) {
    std::cerr << report.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << report.dump(2) << '\n';
}

}  // namespace retro_tool
