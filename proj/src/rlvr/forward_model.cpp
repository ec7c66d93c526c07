#include "retrokit/rlvr/forward_model.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/smiles.hpp"
#include "retrokit/errors.hpp"

namespace retrokit::rlvr {

using json = nlohmann::json;

std::vector<std::string> TemplateOracle::predict(const std::vector<chem::Molecule>& reactants) {
  ++calls_;
  return library_.predict(reactants);
}

std::vector<std::string> ServiceForwardModel::predict(const std::vector<chem::Molecule>& reactants) {
  std::string prompt;
  for (const auto& m : reactants) {
    if (!prompt.empty()) prompt += '.';
    prompt += chem::write_smiles(m, true);
  }
  const gen::Completion c = client_->generate(prompt, config_);
  if (c.finish == gen::FinishReason::Error) {
    spdlog::warn("forward service failed for {}", prompt);
    return {};
  }
  std::string text = c.text;
  text.erase(0, text.find_first_not_of(" \t\r\n"));
  text.erase(text.find_last_not_of(" \t\r\n") + 1);
  if (auto key = chem::canonical_key(text)) return {*key};
  return {};
}

std::vector<chem::Molecule> parse_reactants(std::string_view smiles) {
  std::vector<chem::Molecule> out;
  std::size_t start = 0;
  while (start <= smiles.size()) {
    const std::size_t dot = std::min(smiles.find('.', start), smiles.size());
    const std::string_view piece = smiles.substr(start, dot - start);
    if (!piece.empty()) out.push_back(chem::parse_smiles(piece));
    start = dot + 1;
  }
  if (out.empty()) throw Error("no reactants");
  return out;
}

std::string reactant_key(const std::vector<chem::Molecule>& reactants) {
  std::vector<std::string> parts;
  for (const auto& m : reactants) parts.push_back(chem::canonical_smiles(m));
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (const auto& p : parts) {
    if (!key.empty()) key += '.';
    key += p;
  }
  return key;
}

VerifierCache::VerifierCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      map_[j.at("key").get<std::string>()] = j.at("value").get<std::vector<std::string>>();
    } catch (const json::exception&) {
      spdlog::warn("skipping unreadable cache line in {}", path_);
    }
  }
}

std::optional<std::vector<std::string>> VerifierCache::find(const std::string& key) const {
  std::shared_lock lock(mu_);
  const auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void VerifierCache::store(const std::string& key, const std::vector<std::string>& value) {
  std::unique_lock lock(mu_);
  if (!map_.emplace(key, value).second) return;
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  out << json{{"key", key}, {"value", value}}.dump() << '\n';
  if (!out) spdlog::warn("could not append to cache file {}", path_);
}

std::size_t VerifierCache::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

std::vector<std::string> cached_predict(const std::vector<chem::Molecule>& reactants, ForwardModel& fwd,
                                        VerifierCache* cache) {
  if (!cache) return fwd.predict(reactants);
  const std::string key = reactant_key(reactants);
  if (auto hit = cache->find(key)) return *hit;
  auto value = fwd.predict(reactants);
  cache->store(key, value);
  return value;
}

}  // namespace retrokit::rlvr
