#include "retrokit/eval/rarity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "retrokit/errors.hpp"

namespace retrokit::eval {

std::vector<std::string> char_ngrams(std::string_view text, int n) {
  std::vector<std::string> out;
  if (n < 1) throw std::invalid_argument("n-gram length must be positive");
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= text.size(); ++i) out.emplace_back(text.substr(i, len));
  return out;
}

RarityModel::RarityModel(int n, std::map<std::string, long> counts) : n_(n), counts_(std::move(counts)) {
  for (const auto& [t, c] : counts_) {
    if (c <= 0) throw std::invalid_argument("n-gram counts must be positive");
    total_ += c;
  }
  if (total_ == 0) throw std::invalid_argument("empty n-gram table");
}

long RarityModel::count(const std::string& token) const {
  const auto it = counts_.find(token);
  return it == counts_.end() ? 0 : it->second;
}

double RarityModel::score(const std::string& token) const {
  const long c = count(token);
  if (c > 0) return -std::log(static_cast<double>(c) / static_cast<double>(total_));
  return -std::log(1.0 / static_cast<double>(total_ + static_cast<long>(counts_.size())));
}

RarityModel build_rarity_model(const std::vector<std::string>& corpus, int n) {
  std::map<std::string, long> counts;
  for (const auto& s : corpus) {
    for (auto& t : char_ngrams(s, n)) ++counts[t];
  }
  return RarityModel(n, std::move(counts));
}

double score_instance(std::string_view smiles, const RarityModel& model) {
  const auto grams = char_ngrams(smiles, model.n());
  if (grams.empty()) return 0.0;
  double sum = 0;
  for (const auto& t : grams) sum += model.score(t);
  return sum / static_cast<double>(grams.size());
}

std::vector<double> score_instances(const std::vector<std::string>& smiles, const RarityModel& model) {
  std::vector<double> out(smiles.size());
  const auto n = static_cast<std::ptrdiff_t>(smiles.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = score_instance(smiles[static_cast<std::size_t>(i)], model);
  }
  return out;
}

std::vector<double> score_instances_serial(const std::vector<std::string>& smiles, const RarityModel& model) {
  std::vector<double> out;
  out.reserve(smiles.size());
  for (const auto& s : smiles) out.push_back(score_instance(s, model));
  return out;
}

std::vector<std::string> Hardsets::rare_template() const {
  auto out = rare_template_low;
  out.insert(out.end(), rare_template_mid.begin(), rare_template_mid.end());
  return out;
}

std::vector<std::string> Hardsets::rare_token() const {
  auto out = rare_token_2gram;
  out.insert(out.end(), rare_token_3gram.begin(), rare_token_3gram.end());
  return out;
}

namespace {

std::vector<std::string> draw(std::vector<std::string> bucket, std::size_t want, std::mt19937_64& rng,
                              const std::string& label) {
  if (bucket.size() < want) {
    throw InsufficientPool(label + ": need " + std::to_string(want) + ", pool has " + std::to_string(bucket.size()));
  }
  std::sort(bucket.begin(), bucket.end());
  std::shuffle(bucket.begin(), bucket.end(), rng);
  bucket.resize(want);
  return bucket;
}

std::vector<std::pair<double, std::string>> ranked(const std::vector<CorpusEntry>& pool, const RarityModel& model) {
  std::vector<std::string> products;
  products.reserve(pool.size());
  for (const auto& e : pool) products.push_back(e.product);
  const auto scores = score_instances(products, model);
  std::vector<std::pair<double, std::string>> out;
  for (std::size_t i = 0; i < pool.size(); ++i) out.emplace_back(scores[i], pool[i].id);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  return out;
}

}  // namespace

Hardsets build_hardsets(const std::vector<CorpusEntry>& corpus, const std::vector<CorpusEntry>& pool,
                        const HardsetConfig& config) {
  const std::size_t half = config.size / 2;
  const std::size_t other = config.size - half;
  std::map<std::string, long> freq;
  std::vector<std::string> products;
  for (const auto& e : corpus) {
    if (!e.template_form.empty()) ++freq[e.template_form];
    products.push_back(e.product);
  }

  std::vector<std::string> low, mid;
  for (const auto& e : pool) {
    if (e.template_form.empty()) continue;
    const auto it = freq.find(e.template_form);
    const long f = it == freq.end() ? 0 : it->second;
    if (f >= 1 && f <= 3) low.push_back(e.id);
    if (f >= 4 && f <= 6) mid.push_back(e.id);
  }
  Hardsets h;
  std::mt19937_64 rng(config.seed);
  h.rare_template_low = draw(low, half, rng, "template frequency 1-3");
  h.rare_template_mid = draw(mid, other, rng, "template frequency 4-6");

  std::set<std::string> taken;
  for (const auto& [score, id] : ranked(pool, build_rarity_model(products, 2))) {
    if (h.rare_token_2gram.size() == half) break;
    h.rare_token_2gram.push_back(id);
    taken.insert(id);
  }
  for (const auto& [score, id] : ranked(pool, build_rarity_model(products, 3))) {
    if (h.rare_token_3gram.size() == other) break;
    if (taken.count(id)) continue;
    h.rare_token_3gram.push_back(id);
  }
  if (h.rare_token_2gram.size() < half || h.rare_token_3gram.size() < other) {
    throw InsufficientPool("rare-token set: pool has " + std::to_string(pool.size()) + " instances, need " +
                           std::to_string(config.size));
  }
  return h;
}

}  // namespace retrokit::eval
