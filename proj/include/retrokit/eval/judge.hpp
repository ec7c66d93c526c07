#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "retrokit/gen/generator.hpp"

namespace retrokit::eval {

enum class Verdict { A, B, Tie };

std::string to_string(Verdict v);
std::optional<Verdict> parse_verdict(const std::string& text);

/// Compares two reasoning texts for one product, `first` shown as A.
/// nullopt means the judge could not be reached or gave no verdict.
class Judge {
 public:
  virtual ~Judge() = default;
  virtual std::optional<Verdict> judge(const std::string& product, const std::string& first,
                                       const std::string& second) = 0;
};

/// Judge backed by a chat model. The template's {product}, {reasoning_a} and
/// {reasoning_b} placeholders are filled in; the verdict is read from the
/// last line of the form `Winner: A|B|tie`.
class ChatJudge : public Judge {
 public:
  ChatJudge(std::shared_ptr<gen::TextGenerator> model, gen::GenConfig config, std::string prompt_template);
  std::optional<Verdict> judge(const std::string& product, const std::string& first,
                               const std::string& second) override;

 private:
  std::shared_ptr<gen::TextGenerator> model_;
  gen::GenConfig config_;
  std::string template_;
};

struct JudgePair {
  std::string id;
  std::string product;
  std::string model_a;
  std::string model_b;
  std::string reasoning_a;
  std::string reasoning_b;
};

struct JudgeTally {
  long a_wins = 0;
  long b_wins = 0;
  long ties = 0;
  /// The two orderings disagreed.
  long discarded = 0;
  /// At least one judgement failed.
  long errors = 0;
};

/// Each pair is judged as (A, B) and again as (B, A); the second verdict is
/// mapped back and the pair counts only when both agree. Tallies are keyed
/// by (model_a, model_b).
std::map<std::pair<std::string, std::string>, JudgeTally> judge_winrate(const std::vector<JudgePair>& pairs,
                                                                        Judge& judge);

}  // namespace retrokit::eval
