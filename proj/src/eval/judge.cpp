#include "retrokit/eval/judge.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace retrokit::eval {
namespace {

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

Verdict unswap(Verdict v) {
  if (v == Verdict::A) return Verdict::B;
  if (v == Verdict::B) return Verdict::A;
  return Verdict::Tie;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::A: return "A";
    case Verdict::B: return "B";
    case Verdict::Tie: return "tie";
  }
  return {};
}

std::optional<Verdict> parse_verdict(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<Verdict> found;
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string head = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    auto strip = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t\r*"));
      s.erase(s.find_last_not_of(" \t\r*.") + 1);
      std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    };
    strip(head);
    strip(value);
    if (head != "winner") continue;
    if (value == "a") found = Verdict::A;
    else if (value == "b") found = Verdict::B;
    else if (value == "tie") found = Verdict::Tie;
  }
  return found;
}

ChatJudge::ChatJudge(std::shared_ptr<gen::TextGenerator> model, gen::GenConfig config, std::string prompt_template)
    : model_(std::move(model)), config_(std::move(config)), template_(std::move(prompt_template)) {}

std::optional<Verdict> ChatJudge::judge(const std::string& product, const std::string& first,
                                        const std::string& second) {
  std::string prompt = template_;
  replace_all(prompt, "{product}", product);
  replace_all(prompt, "{reasoning_a}", first);
  replace_all(prompt, "{reasoning_b}", second);
  const gen::Completion c = model_->generate(prompt, config_);
  if (c.finish == gen::FinishReason::Error) return std::nullopt;
  return parse_verdict(c.text);
}

std::map<std::pair<std::string, std::string>, JudgeTally> judge_winrate(const std::vector<JudgePair>& pairs,
                                                                        Judge& judge) {
  std::map<std::pair<std::string, std::string>, JudgeTally> out;
  for (const auto& p : pairs) {
    JudgeTally& t = out[{p.model_a, p.model_b}];
    const auto forward = judge.judge(p.product, p.reasoning_a, p.reasoning_b);
    const auto swapped = judge.judge(p.product, p.reasoning_b, p.reasoning_a);
    if (!forward || !swapped) {
      ++t.errors;
      continue;
    }
    if (*forward != unswap(*swapped)) {
      ++t.discarded;
      continue;
    }
    switch (*forward) {
      case Verdict::A: ++t.a_wins; break;
      case Verdict::B: ++t.b_wins; break;
      case Verdict::Tie: ++t.ties; break;
    }
  }
  return out;
}

}  // namespace retrokit::eval
