#include "retrokit/gen/generator.hpp"

#include <array>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace retrokit::gen {
namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string line_value(const std::string& prompt, std::string_view key) {
  const auto pos = prompt.find(key);
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size();
  return prompt.substr(start, prompt.find('\n', start) - start);
}

std::vector<std::string> all_values(const std::string& prompt, std::string_view key) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = prompt.find(key, pos)) != std::string::npos) {
    const auto start = pos + key.size();
    out.push_back(prompt.substr(start, prompt.find('\n', start) - start));
    pos = start;
  }
  return out;
}

std::string group_name(const std::string& field) { return field.substr(0, field.find(" |")); }

}  // namespace

void validate(const GenConfig& c) {
  if (c.queue_capacity <= 0) throw std::invalid_argument("queue_capacity must be positive");
  if (c.consumers < 1) throw std::invalid_argument("consumers must be at least 1");
  if (c.per_consumer_concurrency < 1) throw std::invalid_argument("per_consumer_concurrency must be at least 1");
  if (c.variants_per_instance < 1) throw std::invalid_argument("variants_per_instance must be at least 1");
  if (c.max_tokens < 1) throw std::invalid_argument("max_tokens must be at least 1");
  if (c.temperature < 0) throw std::invalid_argument("temperature must be non-negative");
}

std::string to_string(FinishReason r) {
  switch (r) {
    case FinishReason::Stop: return "stop";
    case FinishReason::Length: return "length";
    case FinishReason::Error: return "error";
  }
  return "error";
}

int count_tokens(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  int n = 0;
  while (in >> word) ++n;
  return n;
}

Completion DeterministicFiller::generate(const std::string& prompt, const GenConfig& config) {
  std::mt19937_64 rng(fnv1a(prompt, seed_ * 0x9E3779B97F4A7C15ULL + 1));
  auto pick = [&](const std::vector<std::string>& options) {
    return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
  };

  const std::string slot = line_value(prompt, "Slot: ");
  const auto groups = all_values(prompt, "Functional group: ");
  const std::string group = groups.empty() ? std::string("the carbon skeleton") : group_name(pick(groups));
  const std::string rings = line_value(prompt, "Ring count: ");
  const std::string maps = line_value(prompt, "Atom maps: ");
  const std::string bond = line_value(prompt, "Bond: ");
  const auto synthons = all_values(prompt, "Synthon: ");
  const auto equivalents = all_values(prompt, " => ");

  std::vector<std::string> sentences;
  if (slot == "L12") {
    sentences.push_back(pick({"The product carries " + group + ", which hints at how it was assembled.",
                              "A " + group + " unit stands out in the product.",
                              "Looking at the product, " + group + " is the most reactive handle."}));
    sentences.push_back(pick({"With " + rings + " rings in place, the ring system is unlikely to be the site of change.",
                              "The " + rings + " rings can be carried through unchanged.",
                              "Ring count " + rings + " suggests the rings were present in the starting materials."}));
    sentences.push_back(pick({"This narrows attention to the atoms " + maps + ".",
                              "Atoms " + maps + " form the most plausible reaction centre.",
                              "The candidate region is the set of atoms " + maps + "."}));
  } else if (slot == "L23") {
    sentences.push_back(pick({"Within that region the bond " + bond + " is the one most easily formed.",
                              "Cutting the bond " + bond + " gives two simple pieces.",
                              "The bond " + bond + " links two fragments that are each readily available."}));
    if (synthons.size() >= 2) {
      sentences.push_back(pick({"The cut leaves " + synthons[0] + " and " + synthons[1] + ".",
                                "Disconnection yields the synthons " + synthons[0] + " and " + synthons[1] + "."}));
    } else if (!synthons.empty()) {
      sentences.push_back("The cut opens the ring to " + synthons[0] + ".");
    }
  } else {
    sentences.push_back(pick({"Each synthon now needs a real reagent.",
                              "Next the idealised fragments are matched to stable reagents.",
                              "The synthons translate into purchasable compounds."}));
    for (const auto& e : equivalents) {
      sentences.push_back(pick({"The fragment " + e.substr(0, e.find(' ')) + " is delivered by a suitable reagent.",
                                "A matching reagent supplies that fragment in practice."}));
    }
  }
  if (std::uniform_int_distribution<int>(0, 1)(rng)) {
    sentences.push_back(pick({"This keeps the route short.", "Both partners are common building blocks.",
                              "The step is a standard coupling."}));
  }

  Completion c;
  std::string text;
  int tokens = 0;
  for (const auto& s : sentences) {
    std::istringstream in(s);
    std::string word;
    while (in >> word) {
      if (tokens == config.max_tokens) {
        c.text = text;
        c.finish = FinishReason::Length;
        return c;
      }
      if (!text.empty()) text += ' ';
      text += word;
      ++tokens;
    }
  }
  c.text = text;
  c.finish = FinishReason::Stop;
  return c;
}

}  // namespace retrokit::gen
