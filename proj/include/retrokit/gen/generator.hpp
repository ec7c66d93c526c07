#pragma once

#include <cstdint>
#include <string>

namespace retrokit::gen {

struct GenConfig {
  double temperature = 0.8;
  int max_tokens = 500;
  double presence_penalty = 0.0;
  double frequency_penalty = 0.3;
  int variants_per_instance = 15;
  int queue_capacity = 5000;
  int consumers = 2;
  int per_consumer_concurrency = 4;
  std::string model = "gpt-oss-20b";
};

/// Throws std::invalid_argument when a field is out of range.
void validate(const GenConfig& config);

enum class FinishReason { Stop, Length, Error };

std::string to_string(FinishReason r);

struct Completion {
  std::string text;
  FinishReason finish = FinishReason::Stop;
};

/// Text-generation backend. Implementations must be safe to call from several
/// threads at once.
class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual Completion generate(const std::string& prompt, const GenConfig& config) = 0;
};

/// Offline generator: sentences chosen from fixed templates by an RNG seeded
/// from (seed, prompt), so output depends only on those two values. Tokens are
/// whitespace-separated words; past `max_tokens` the text is cut and the
/// finish reason is Length.
class DeterministicFiller : public TextGenerator {
 public:
  explicit DeterministicFiller(std::uint64_t seed) : seed_(seed) {}
  Completion generate(const std::string& prompt, const GenConfig& config) override;

 private:
  std::uint64_t seed_;
};

/// Number of whitespace-separated tokens.
int count_tokens(const std::string& text);

}  // namespace retrokit::gen
