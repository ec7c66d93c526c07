#include "retrokit/rationale/record.hpp"

#include <stdexcept>

namespace retrokit::rationale {

using json = nlohmann::json;

json to_json(const Rationale& r) {
  json groups = json::array();
  for (const auto& g : r.r1.groups) {
    groups.push_back({{"name", g.name}, {"maps", g.matched_atom_maps}, {"fragment", g.fragment_smiles}});
  }
  json pairs = json::array();
  for (const auto& p : r.r4.pairs) pairs.push_back({{"synthon", p.synthon}, {"reactant", p.reactant}});
  return {{"r1",
           {{"mapped_smiles", r.r1.mapped_smiles},
            {"groups", groups},
            {"ring_count", r.r1.stats.ring_count},
            {"carbon_count", r.r1.stats.carbon_count},
            {"stereo_char_count", r.r1.stats.stereo_char_count}}},
          {"r2", {{"smiles", r.r2.smiles}, {"maps", r.r2.maps}}},
          {"r3",
           {{"bond", {r.r3.bond.map_a, r.r3.bond.map_b}},
            {"order", order_name(r.r3.bond.order)},
            {"synthons", r.r3.synthons}}},
          {"r4", pairs},
          {"answer", r.answer}};
}

Rationale rationale_from_json(const json& j) {
  Rationale r;
  const auto& r1 = j.at("r1");
  r.r1.mapped_smiles = r1.at("mapped_smiles").get<std::string>();
  for (const auto& g : r1.at("groups")) {
    r.r1.groups.push_back({g.at("name").get<std::string>(), g.at("maps").get<std::vector<int>>(),
                           g.at("fragment").get<std::string>()});
  }
  r.r1.stats = {r1.at("ring_count").get<int>(), r1.at("carbon_count").get<int>(),
                r1.at("stereo_char_count").get<int>()};
  r.r2.smiles = j.at("r2").at("smiles").get<std::string>();
  r.r2.maps = j.at("r2").at("maps").get<std::vector<int>>();
  const auto& r3 = j.at("r3");
  const auto bond = r3.at("bond").get<std::vector<int>>();
  if (bond.size() != 2) throw std::invalid_argument("r3.bond needs two maps");
  const auto order = order_from_name(r3.at("order").get<std::string>());
  if (!order) throw std::invalid_argument("unknown bond order in r3");
  r.r3.bond = {bond[0], bond[1], *order};
  r.r3.synthons = r3.at("synthons").get<std::vector<std::string>>();
  for (const auto& p : j.at("r4")) {
    r.r4.pairs.push_back({p.at("synthon").get<std::string>(), p.at("reactant").get<std::string>()});
  }
  r.answer = j.at("answer").get<std::vector<std::string>>();
  return r;
}

json to_json(const Links& l) { return {{"l12", l.l12}, {"l23", l.l23}, {"l34", l.l34}}; }

Links links_from_json(const json& j) {
  return {j.value("l12", ""), j.value("l23", ""), j.value("l34", "")};
}

json record_json(const std::string& id, const std::string& rxn, const Rationale& r, const std::vector<Links>& links) {
  json out = {{"id", id}, {"rxn", rxn}};
  out.update(to_json(r));
  json arr = json::array();
  for (const auto& l : links) arr.push_back(to_json(l));
  out["links"] = arr;
  return out;
}

}  // namespace retrokit::rationale
