#pragma once

#include <string>
#include <vector>

namespace retrokit::eval {

struct FrequencyRow {
  std::string key;
  long count = 0;
};

/// Counts `keys`, most frequent first, ties by key.
std::vector<FrequencyRow> frequency_table(const std::vector<std::string>& keys);

struct Extremes {
  std::vector<FrequencyRow> top;
  std::vector<FrequencyRow> bottom;
};

/// First and last `n` rows. A table with at most 2n rows is returned whole in `top`.
Extremes top_bottom(const std::vector<FrequencyRow>& table, std::size_t n = 15);

/// `<name>.csv` (key,count), `<name>_extremes.csv` (part,rank,key,count) and
/// `<name>.svg`, a horizontal bar chart of the extremes. Returns the paths.
std::vector<std::string> write_histogram(const std::string& dir, const std::string& name,
                                         const std::vector<FrequencyRow>& table, std::size_t n = 15);

/// Template, 2-gram and 3-gram histograms for a corpus.
std::vector<std::string> emit_histograms(const std::string& dir, const std::vector<std::string>& products,
                                         const std::vector<std::string>& templates);

}  // namespace retrokit::eval
