#pragma once

#include <map>
#include <optional>
#include <string>

#include "json.hpp"

namespace retrokit::cli {

/// Settings resolved from flags, then RETROKIT_* environment variables, then
/// a TOML file, then built-in defaults. Keys are dotted (`generation.temperature`);
/// the matching variable is RETROKIT_GENERATION_TEMPERATURE.
class RunConfig {
 public:
  /// Reads `[section]` / `key = value` TOML. Throws retrokit::Error on a bad file.
  void load_file(const std::string& path);
  void set_flag(const std::string& key, const std::string& value);
  void set_default(const std::string& key, const std::string& value);

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;

  /// Where `key` was resolved from: flag, env, file, default, or unset.
  std::string source(const std::string& key) const;

  /// Every key seen in any layer with its value and source.
  nlohmann::json resolved() const;

  const std::string& file_path() const { return file_path_; }

  static std::string env_name(const std::string& key);

 private:
  std::map<std::string, std::string> flags_;
  std::map<std::string, std::string> file_;
  std::map<std::string, std::string> defaults_;
  std::string file_path_;
};

/// Lower-case hex SHA-256 of a file's bytes. Throws retrokit::Error if unreadable.
std::string sha256_file(const std::string& path);

}  // namespace retrokit::cli
