#include "retrokit/rationale/rationale.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/smiles.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/retro/synthon.hpp"

namespace retrokit::rationale {
namespace {

constexpr const char* kTags[4] = {"PRODUCT_INFO", "CANDIDATE_STRUCTURE", "STRATEGIC_BOND_DISCONNECTION",
                                  "SYNTHETIC_EQUIVALENT"};
constexpr const char* kAnswerPrefix = "Reactants:";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string join(const std::vector<int>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto end = s.find(sep, start);
    out.push_back(s.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

std::optional<std::vector<int>> parse_ints(const std::string& s) {
  std::vector<int> out;
  if (trim(s).empty()) return out;
  for (const auto& piece : split(trim(s), ',')) {
    const std::string t = trim(piece);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos || t.size() > 9) return std::nullopt;
    out.push_back(std::stoi(t));
  }
  return out;
}

/// Lines of a block as (key, value) for "Key: value" lines.
std::vector<std::pair<std::string, std::string>> fields(const std::string& body) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos) {
      out.emplace_back(trim(line), std::string{});
    } else {
      out.emplace_back(trim(line.substr(0, colon)), trim(line.substr(colon + 2)));
    }
  }
  return out;
}

std::optional<int> parse_count(const std::string& s) {
  const auto v = parse_ints(s);
  if (!v || v->size() != 1) return std::nullopt;
  return v->front();
}

std::optional<perception::ProductInfo> parse_r1(const std::string& body) {
  perception::ProductInfo info;
  bool have_smiles = false;
  int stats_seen = 0;
  for (const auto& [key, value] : fields(body)) {
    if (key == "Atom-mapped product") {
      info.mapped_smiles = value;
      have_smiles = true;
    } else if (key == "Functional group") {
      const auto parts = split(value, '|');
      if (parts.size() != 3) return std::nullopt;
      perception::FunctionalGroupHit hit;
      hit.name = trim(parts[0]);
      std::string maps = trim(parts[1]);
      if (maps.rfind("maps ", 0) != 0) return std::nullopt;
      auto ints = parse_ints(maps.substr(5));
      if (!ints) return std::nullopt;
      hit.matched_atom_maps = *ints;
      hit.fragment_smiles = trim(parts[2]);
      info.groups.push_back(std::move(hit));
    } else if (key == "Ring count" || key == "Carbon count" || key == "Stereo characters") {
      const auto v = parse_count(value);
      if (!v) return std::nullopt;
      (key == "Ring count" ? info.stats.ring_count
                           : key == "Carbon count" ? info.stats.carbon_count : info.stats.stereo_char_count) = *v;
      ++stats_seen;
    } else {
      return std::nullopt;
    }
  }
  if (!have_smiles || stats_seen != 3) return std::nullopt;
  return info;
}

std::optional<CandidateStructure> parse_r2(const std::string& body) {
  CandidateStructure c;
  bool smiles = false;
  bool maps = false;
  for (const auto& [key, value] : fields(body)) {
    if (key == "Substructure") {
      c.smiles = value;
      smiles = true;
    } else if (key == "Atom maps") {
      auto v = parse_ints(value);
      if (!v) return std::nullopt;
      c.maps = *v;
      maps = true;
    } else {
      return std::nullopt;
    }
  }
  if (!smiles || !maps) return std::nullopt;
  return c;
}

std::optional<DisconnectionStep> parse_r3(const std::string& body) {
  DisconnectionStep d;
  bool bond = false;
  for (const auto& [key, value] : fields(body)) {
    if (key == "Bond") {
      const auto space = value.find(' ');
      const auto dash = value.find('-');
      if (space == std::string::npos || dash == std::string::npos || dash > space) return std::nullopt;
      const auto a = parse_count(value.substr(0, dash));
      const auto b = parse_count(value.substr(dash + 1, space - dash - 1));
      const auto o = order_from_name(trim(value.substr(space + 1)));
      if (!a || !b || !o) return std::nullopt;
      d.bond = {*a, *b, *o};
      bond = true;
    } else if (key == "Synthon") {
      d.synthons.push_back(value);
    } else {
      return std::nullopt;
    }
  }
  if (!bond) return std::nullopt;
  return d;
}

std::optional<EquivalentStep> parse_r4(const std::string& body) {
  EquivalentStep e;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto arrow = line.find(" => ");
    if (arrow == std::string::npos) return std::nullopt;
    e.pairs.push_back({trim(line.substr(0, arrow)), trim(line.substr(arrow + 4))});
  }
  return e;
}

std::optional<std::string> canon_or_none(const std::string& smiles, bool keep_maps) {
  try {
    return chem::canonical_smiles(chem::parse_smiles(smiles), chem::CanonOptions{keep_maps});
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

template <class T, class F>
std::optional<std::multiset<T>> canon_multiset(const std::vector<std::string>& items, F&& f) {
  std::multiset<T> out;
  for (const auto& s : items) {
    auto v = f(s);
    if (!v) return std::nullopt;
    out.insert(*v);
  }
  return out;
}

std::string reaction_header(const std::string& reaction) {
  return "Reaction: " + reaction + "\n";
}

}  // namespace

std::optional<Rationale> PartialRationale::complete() const {
  if (!r1 || !r2 || !r3 || !r4 || !answer) return std::nullopt;
  return Rationale{*r1, *r2, *r3, *r4, links, *answer};
}

Rationale build_rationale(const chem::MappedReaction& mr, const std::vector<perception::PatternDef>& patterns) {
  const retro::ReactionDiff diff = retro::diff_bonds(mr);
  if (diff.empty()) throw NoChangeError("reaction " + mr.record().id + " has no bond or atom changes");
  const auto disconnections = retro::identify_disconnections(mr, diff);
  if (disconnections.empty()) throw NoDisconnectionError("reaction " + mr.record().id + " forms no bond");
  const retro::TemplateCore core = retro::template_core(mr, diff);

  Rationale r;
  r.r1 = perception::analyze_product(mr, patterns);

  std::vector<int> core_maps = core.changed;
  core_maps.insert(core_maps.end(), core.context.begin(), core.context.end());
  std::sort(core_maps.begin(), core_maps.end());
  std::vector<int> atoms;
  for (int m : core_maps) atoms.push_back(mr.product_atom(m));
  r.r2.smiles = chem::canonical_smiles(chem::induced_subgraph(mr.product(), atoms, atoms), chem::CanonOptions{true});
  r.r2.maps = core_maps;

  const auto& d = disconnections.front();
  const retro::SynthonSplit split = retro::make_synthons(mr.product(), d);
  r.r3.bond = d;
  for (const auto& s : split.synthons) r.r3.synthons.push_back(s.smiles);

  const auto eq = retro::map_equivalents(mr, split.synthons);
  std::set<int> used;
  for (const auto& p : eq.pairs) {
    r.r4.pairs.push_back({p.synthon.smiles, p.smiles});
    used.insert(p.precursor);
  }
  for (int mi : used) r.answer.push_back(chem::canonical_smiles(mr.precursors()[static_cast<std::size_t>(mi)]));
  return r;
}

std::string render_block(const Rationale& r, int step) {
  std::string body;
  switch (step) {
    case 1:
      body += "Atom-mapped product: " + r.r1.mapped_smiles + "\n";
      for (const auto& g : r.r1.groups) {
        body += "Functional group: " + g.name + " | maps " + join(g.matched_atom_maps, ',') + " | " + g.fragment_smiles + "\n";
      }
      body += "Ring count: " + std::to_string(r.r1.stats.ring_count) + "\n";
      body += "Carbon count: " + std::to_string(r.r1.stats.carbon_count) + "\n";
      body += "Stereo characters: " + std::to_string(r.r1.stats.stereo_char_count) + "\n";
      break;
    case 2:
      body += "Substructure: " + r.r2.smiles + "\n";
      body += "Atom maps: " + join(r.r2.maps, ',') + "\n";
      break;
    case 3:
      body += "Bond: " + std::to_string(r.r3.bond.map_a) + "-" + std::to_string(r.r3.bond.map_b) + " " +
              order_name(r.r3.bond.order) + "\n";
      for (const auto& s : r.r3.synthons) body += "Synthon: " + s + "\n";
      break;
    case 4:
      for (const auto& p : r.r4.pairs) body += p.synthon + " => " + p.reactant + "\n";
      break;
    default:
      throw std::invalid_argument("step must be 1..4");
  }
  const std::string tag = kTags[step - 1];
  return "<" + tag + ">\n" + body + "</" + tag + ">\n";
}

std::string render(const Rationale& r) {
  const std::string* links[3] = {&r.links.l12, &r.links.l23, &r.links.l34};
  std::string out;
  for (int step = 1; step <= 4; ++step) {
    out += render_block(r, step);
    if (step < 4 && !links[step - 1]->empty()) out += *links[step - 1] + "\n";
  }
  out += std::string(kAnswerPrefix) + " " + join(r.answer, ".") + "\n";
  return out;
}

PartialRationale parse_output(const std::string& text) {
  PartialRationale p;
  std::size_t open[4];
  std::size_t close_end[4];
  bool found[4] = {false, false, false, false};
  std::string bodies[4];
  for (int k = 0; k < 4; ++k) {
    const std::string start = "<" + std::string(kTags[k]) + ">";
    const std::string end = "</" + std::string(kTags[k]) + ">";
    const auto s = text.find(start);
    if (s == std::string::npos) continue;
    const auto e = text.find(end, s + start.size());
    if (e == std::string::npos) continue;
    found[k] = true;
    open[k] = s;
    close_end[k] = e + end.size();
    bodies[k] = text.substr(s + start.size(), e - s - start.size());
  }
  if (found[0]) p.r1 = parse_r1(bodies[0]);
  if (found[1]) p.r2 = parse_r2(bodies[1]);
  if (found[2]) p.r3 = parse_r3(bodies[2]);
  if (found[3]) p.r4 = parse_r4(bodies[3]);
  std::string* links[3] = {&p.links.l12, &p.links.l23, &p.links.l34};
  for (int k = 0; k < 3; ++k) {
    if (found[k] && found[k + 1] && close_end[k] <= open[k + 1]) {
      *links[k] = trim(std::string_view(text).substr(close_end[k], open[k + 1] - close_end[k]));
    }
  }

  std::istringstream in(text);
  std::string line;
  std::optional<std::string> answer;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.rfind(kAnswerPrefix, 0) == 0) answer = trim(t.substr(std::string(kAnswerPrefix).size()));
  }
  if (answer) {
    std::vector<std::string> parts;
    if (!answer->empty()) {
      for (auto& piece : split(*answer, '.')) {
        if (!piece.empty()) parts.push_back(piece);
      }
    }
    p.answer = std::move(parts);
  }
  return p;
}

StepScore score_steps(const PartialRationale& pred, const Rationale& gold) {
  StepScore s;
  if (pred.r1) {
    const auto a = canon_or_none(pred.r1->mapped_smiles, true);
    s.atom_mapping = a && a == canon_or_none(gold.r1.mapped_smiles, true);
    auto group_set = [](const std::vector<perception::FunctionalGroupHit>& groups) {
      std::multiset<std::pair<std::string, std::vector<int>>> out;
      for (const auto& g : groups) {
        auto maps = g.matched_atom_maps;
        std::sort(maps.begin(), maps.end());
        out.insert({g.name, maps});
      }
      return out;
    };
    s.functional_groups = group_set(pred.r1->groups) == group_set(gold.r1.groups);
    s.smiles_stats = pred.r1->stats == gold.r1.stats;
  }
  if (pred.r2) {
    const auto a = canon_or_none(pred.r2->smiles, true);
    s.candidate_structure = a && a == canon_or_none(gold.r2.smiles, true);
  }
  if (pred.r3) {
    const auto& pb = pred.r3->bond;
    const auto& gb = gold.r3.bond;
    s.disconnection = std::minmax(pb.map_a, pb.map_b) == std::minmax(gb.map_a, gb.map_b) && pb.order == gb.order;
    auto canon = [](const std::string& x) { return canon_or_none(x, false); };
    const auto ps = canon_multiset<std::string>(pred.r3->synthons, canon);
    s.synthons = ps && ps == canon_multiset<std::string>(gold.r3.synthons, canon);
  }
  if (pred.r4) {
    auto pairs = [](const EquivalentStep& e) -> std::optional<std::multiset<std::pair<std::string, std::string>>> {
      std::multiset<std::pair<std::string, std::string>> out;
      for (const auto& p : e.pairs) {
        auto a = canon_or_none(p.synthon, false);
        auto b = canon_or_none(p.reactant, false);
        if (!a || !b) return std::nullopt;
        out.insert({*a, *b});
      }
      return out;
    };
    const auto pp = pairs(*pred.r4);
    s.equivalents = pp && pp == pairs(gold.r4);
  }
  return s;
}

std::string slot_name(LinkSlot slot) {
  switch (slot) {
    case LinkSlot::L12: return "L12";
    case LinkSlot::L23: return "L23";
    case LinkSlot::L34: return "L34";
  }
  return "L12";
}

std::string link_prompt(const Rationale& r, const std::string& reaction, LinkSlot slot) {
  std::string p = "Write a short passage of chemical reasoning that connects the two marked steps.\n";
  p += "Slot: " + slot_name(slot) + "\n";
  p += reaction_header(reaction);
  p += render_block(r, 1);
  if (slot == LinkSlot::L12) return p + render_block(r, 2);
  p += r.links.l12 + "\n" + render_block(r, 2);
  if (slot == LinkSlot::L23) return p + render_block(r, 3);
  p += r.links.l23 + "\n" + render_block(r, 3) + render_block(r, 4);
  return p;
}

VariantLinks generate_variant(const Rationale& r, const std::string& reaction, int variant,
                              gen::TextGenerator& generator, const gen::GenConfig& config,
                              const std::function<void(LinkSlot)>& before_request) {
  VariantLinks out;
  Rationale cur = r;
  cur.links = Links{};
  std::string* slots[3] = {&cur.links.l12, &cur.links.l23, &cur.links.l34};
  const LinkSlot names[3] = {LinkSlot::L12, LinkSlot::L23, LinkSlot::L34};
  const std::string header = reaction + "\nVariant: " + std::to_string(variant);
  for (int k = 0; k < 3; ++k) {
    const std::string prompt = link_prompt(cur, header, names[k]);
    gen::Completion c;
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (before_request) before_request(names[k]);
      c = generator.generate(prompt, config);
      if (c.finish != gen::FinishReason::Error) break;
    }
    if (c.finish == gen::FinishReason::Error) {
      out.status = VariantStatus::Failed;
      return out;
    }
    if (c.finish == gen::FinishReason::Length) {
      out.status = VariantStatus::Truncated;
      return out;
    }
    *slots[k] = trim(c.text);
  }
  out.links = cur.links;
  return out;
}

LinkOutcome orchestrate_links(const Rationale& r, const std::string& reaction, gen::TextGenerator& generator,
                              const gen::GenConfig& config, int n) {
  std::vector<VariantLinks> results(static_cast<std::size_t>(std::max(n, 0)));
  std::vector<std::thread> threads;
  for (std::size_t v = 0; v < results.size(); ++v) {
    threads.emplace_back([&, v] { results[v] = generate_variant(r, reaction, static_cast<int>(v), generator, config); });
  }
  for (auto& t : threads) t.join();

  LinkOutcome out;
  for (auto& res : results) {
    switch (res.status) {
      case VariantStatus::Ok: {
        Rationale v = r;
        v.links = std::move(res.links);
        out.variants.push_back(std::move(v));
        break;
      }
      case VariantStatus::Truncated: ++out.dropped_truncation; break;
      case VariantStatus::Failed: ++out.dropped_error; break;
    }
  }
  return out;
}

std::string order_name(chem::BondOrder o) {
  switch (o) {
    case chem::BondOrder::Single: return "single";
    case chem::BondOrder::Double: return "double";
    case chem::BondOrder::Triple: return "triple";
    case chem::BondOrder::Aromatic: return "aromatic";
  }
  return "single";
}

std::optional<chem::BondOrder> order_from_name(const std::string& s) {
  if (s == "single") return chem::BondOrder::Single;
  if (s == "double") return chem::BondOrder::Double;
  if (s == "triple") return chem::BondOrder::Triple;
  if (s == "aromatic") return chem::BondOrder::Aromatic;
  return std::nullopt;
}

}  // namespace retrokit::rationale
