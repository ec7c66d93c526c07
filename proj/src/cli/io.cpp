#include "retrokit/cli/io.hpp"

#include <fstream>
#include <map>
#include <set>

#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/reaction.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/rlvr/forward_model.hpp"

namespace retrokit::cli {

using json = nlohmann::json;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return in;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const SyntaxError*>(&e)) return "SyntaxError";
  if (dynamic_cast<const ValenceError*>(&e)) return "ValenceError";
  if (dynamic_cast<const MappingError*>(&e)) return "MappingError";
  return "Error";
}

}  // namespace

std::vector<gen::InputRecord> read_reaction_records(const std::string& path) {
  auto in = open_in(path);
  std::vector<gen::InputRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line[first] == '{') {
      const json j = json::parse(line);
      out.push_back({j.value("id", "line-" + std::to_string(n)), j.at("rxn").get<std::string>()});
      continue;
    }
    const auto tab = line.find('\t');
    gen::InputRecord rec{"line-" + std::to_string(n), line.substr(0, tab)};
    if (tab != std::string::npos) {
      const auto tab2 = line.find('\t', tab + 1);
      const std::string id = line.substr(tab + 1, tab2 == std::string::npos ? std::string::npos : tab2 - tab - 1);
      if (!id.empty()) rec.id = id;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<eval::SampleSet> read_sample_sets(const std::string& path) {
  auto in = open_in(path);
  std::vector<eval::SampleSet> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line);
    out.push_back({j.at("id").get<std::string>(), j.at("product").get<std::string>(),
                   j.at("label_reactants").get<std::string>(), j.value("greedy", ""),
                   j.at("samples").get<std::vector<std::string>>()});
  }
  return out;
}

IngestResult ingest(const std::vector<gen::InputRecord>& input) {
  IngestResult res;
  std::set<std::pair<std::string, std::string>> seen;
  std::map<std::string, std::set<std::string>> reactant_sets;
  for (const auto& rec : input) {
    ++res.lines;
    try {
      const auto mapped = chem::bind_atom_maps(chem::parse_rxn(rec.rxn, rec.id));
      IngestedRecord out;
      out.id = rec.id;
      out.rxn = rec.rxn;
      out.product = chem::canonical_smiles(mapped.product());
      out.reactants = rlvr::reactant_key(mapped.precursors());
      if (!seen.insert({out.reactants, out.product}).second) {
        ++res.duplicates;
        continue;
      }
      reactant_sets[out.product].insert(out.reactants);
      res.records.push_back(std::move(out));
    } catch (const Error& e) {
      res.drops.push_back({rec.id, res.lines, error_kind(e), e.what()});
    }
  }
  for (auto& r : res.records) {
    r.multi_label = reactant_sets[r.product].size() > 1;
    if (r.multi_label) ++res.multi_label;
  }
  return res;
}

json to_json(const IngestedRecord& r) {
  return {{"id", r.id}, {"rxn", r.rxn}, {"product", r.product}, {"reactants", r.reactants},
          {"multi_label", r.multi_label}};
}

}  // namespace retrokit::cli
