#pragma once

#include <random>
#include <string>
#include <vector>

#include "retrokit/eval/rarity.hpp"

namespace fixture {

/// Corpus with `groups[i].second` distinct templates each used exactly
/// `groups[i].first` times, and random SMILES-alphabet product strings.
inline std::vector<retrokit::eval::CorpusEntry> synthetic_corpus(const std::vector<std::pair<int, int>>& groups,
                                                                 std::uint64_t seed) {
  static const std::string alphabet = "CCCCCCcccNNOOSFClBr()=#123[]@+-";
  std::mt19937_64 rng(seed);
  std::vector<retrokit::eval::CorpusEntry> out;
  int t = 0;
  for (const auto& [freq, count] : groups) {
    for (int g = 0; g < count; ++g, ++t) {
      for (int i = 0; i < freq; ++i) {
        std::string product;
        const std::size_t len = 4 + rng() % 30;
        for (std::size_t c = 0; c < len; ++c) product += alphabet[rng() % alphabet.size()];
        char id[32];
        std::snprintf(id, sizeof id, "syn-%05zu", out.size());
        out.push_back({id, product, "T" + std::to_string(t) + "x" + std::to_string(freq)});
      }
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace fixture
