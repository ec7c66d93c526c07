#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace retrokit::eval {

/// Sliding character n-grams of `text`; empty when it is shorter than n.
std::vector<std::string> char_ngrams(std::string_view text, int n);

/// Occurrence counts of character n-grams over a corpus, scored as
/// s(t) = -ln(c(t) / N).
class RarityModel {
 public:
  RarityModel(int n, std::map<std::string, long> counts);

  int n() const { return n_; }
  long total() const { return total_; }
  long count(const std::string& token) const;
  const std::map<std::string, long>& counts() const { return counts_; }

  /// Unseen tokens get one pseudo-count against an add-one total N + V,
  /// which puts them above every seen token.
  double score(const std::string& token) const;

 private:
  int n_;
  std::map<std::string, long> counts_;
  long total_ = 0;
};

RarityModel build_rarity_model(const std::vector<std::string>& corpus, int n);

/// Mean token score over the instance's n-grams; 0 when it has none.
double score_instance(std::string_view smiles, const RarityModel& model);

/// score_instance over a batch, split across OpenMP threads.
std::vector<double> score_instances(const std::vector<std::string>& smiles, const RarityModel& model);
std::vector<double> score_instances_serial(const std::vector<std::string>& smiles, const RarityModel& model);

struct CorpusEntry {
  std::string id;
  std::string product;
  /// Canonical template string; empty when none could be extracted.
  std::string template_form;
};

struct HardsetConfig {
  /// Total per hard set, split evenly between its two halves.
  std::size_t size = 100;
  std::uint64_t seed = 0;
};

struct Hardsets {
  std::vector<std::string> rare_template_low;   // template frequency 1..3
  std::vector<std::string> rare_template_mid;   // template frequency 4..6
  std::vector<std::string> rare_token_2gram;
  std::vector<std::string> rare_token_3gram;

  std::vector<std::string> rare_template() const;
  std::vector<std::string> rare_token() const;
};

/// Template frequencies and n-gram counts come from `corpus`; selections come
/// from `pool`. Rare-template halves are drawn at random with the seeded RNG.
/// Rare-token halves take the highest 2-gram and then 3-gram scores, skipping
/// ids already taken. Throws InsufficientPool when a half cannot be filled.
Hardsets build_hardsets(const std::vector<CorpusEntry>& corpus, const std::vector<CorpusEntry>& pool,
                        const HardsetConfig& config);

}  // namespace retrokit::eval
