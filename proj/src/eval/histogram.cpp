#include "retrokit/eval/histogram.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "retrokit/errors.hpp"
#include "retrokit/eval/rarity.hpp"

namespace retrokit::eval {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

void write_svg(const std::string& path, const std::string& title, const Extremes& ex) {
  std::vector<std::pair<std::string, const FrequencyRow*>> rows;
  for (const auto& r : ex.top) rows.emplace_back("top", &r);
  for (const auto& r : ex.bottom) rows.emplace_back("bottom", &r);
  long max_count = 1;
  for (const auto& [part, r] : rows) max_count = std::max(max_count, r->count);

  const int bar_h = 18, label_w = 420, chart_w = 360, top_margin = 40;
  const int height = top_margin + static_cast<int>(rows.size()) * (bar_h + 4) + 20;
  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << label_w + chart_w + 80 << "\" height=\"" << height
      << "\" font-family=\"monospace\" font-size=\"11\">\n";
  out << "<text x=\"10\" y=\"20\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  int y = top_margin;
  for (const auto& [part, r] : rows) {
    const int w = static_cast<int>(static_cast<double>(r->count) / static_cast<double>(max_count) * chart_w);
    std::string label = r->key.size() > 60 ? r->key.substr(0, 57) + "..." : r->key;
    out << "<text x=\"" << label_w - 6 << "\" y=\"" << y + 13 << "\" text-anchor=\"end\">" << xml_escape(label)
        << "</text>\n";
    out << "<rect x=\"" << label_w << "\" y=\"" << y << "\" width=\"" << std::max(w, 1) << "\" height=\"" << bar_h
        << "\" fill=\"" << (part == "top" ? "#3b6ea5" : "#c0504d") << "\"/>\n";
    out << "<text x=\"" << label_w + std::max(w, 1) + 4 << "\" y=\"" << y + 13 << "\">" << r->count << "</text>\n";
    y += bar_h + 4;
  }
  out << "</svg>\n";
}

}  // namespace

std::vector<FrequencyRow> frequency_table(const std::vector<std::string>& keys) {
  std::map<std::string, long> counts;
  for (const auto& k : keys) ++counts[k];
  std::vector<FrequencyRow> rows;
  for (auto& [k, c] : counts) rows.push_back({k, c});
  std::stable_sort(rows.begin(), rows.end(), [](const FrequencyRow& a, const FrequencyRow& b) {
    return a.count > b.count;
  });
  return rows;
}

Extremes top_bottom(const std::vector<FrequencyRow>& table, std::size_t n) {
  Extremes ex;
  if (table.size() <= 2 * n) {
    ex.top = table;
    return ex;
  }
  ex.top.assign(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(n));
  ex.bottom.assign(table.end() - static_cast<std::ptrdiff_t>(n), table.end());
  return ex;
}

std::vector<std::string> write_histogram(const std::string& dir, const std::string& name,
                                         const std::vector<FrequencyRow>& table, std::size_t n) {
  std::filesystem::create_directories(dir);
  const std::string base = (std::filesystem::path(dir) / name).string();
  {
    auto out = open_out(base + ".csv");
    out << "key,count\n";
    for (const auto& r : table) out << csv_field(r.key) << ',' << r.count << '\n';
  }
  const Extremes ex = top_bottom(table, n);
  {
    auto out = open_out(base + "_extremes.csv");
    out << "part,rank,key,count\n";
    for (std::size_t i = 0; i < ex.top.size(); ++i) {
      out << "top," << i + 1 << ',' << csv_field(ex.top[i].key) << ',' << ex.top[i].count << '\n';
    }
    const std::size_t first_bottom = table.size() - ex.bottom.size();
    for (std::size_t i = 0; i < ex.bottom.size(); ++i) {
      out << "bottom," << first_bottom + i + 1 << ',' << csv_field(ex.bottom[i].key) << ',' << ex.bottom[i].count
          << '\n';
    }
  }
  write_svg(base + ".svg", name, ex);
  return {base + ".csv", base + "_extremes.csv", base + ".svg"};
}

std::vector<std::string> emit_histograms(const std::string& dir, const std::vector<std::string>& products,
                                         const std::vector<std::string>& templates) {
  std::vector<std::string> paths;
  auto add = [&](const std::vector<std::string>& p) { paths.insert(paths.end(), p.begin(), p.end()); };
  add(write_histogram(dir, "template_frequency", frequency_table(templates)));
  for (int n : {2, 3}) {
    std::vector<std::string> grams;
    for (const auto& s : products) {
      auto g = char_ngrams(s, n);
      grams.insert(grams.end(), g.begin(), g.end());
    }
    add(write_histogram(dir, std::to_string(n) + "gram_frequency", frequency_table(grams)));
  }
  return paths;
}

}  // namespace retrokit::eval
