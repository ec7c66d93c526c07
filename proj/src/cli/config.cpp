#include "retrokit/cli/config.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "retrokit/errors.hpp"

namespace retrokit::cli {

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw Error("bad config " + path + ": " + e.what());
  }
  for (const auto& item : items) {
    if (item.inputs.empty() || item.name == "++" || item.name == "--") continue;
    std::string value;
    for (const auto& v : item.inputs) {
      if (!value.empty()) value += ',';
      value += v;
    }
    file_[item.fullname()] = value;
  }
  file_path_ = path;
}

void RunConfig::set_flag(const std::string& key, const std::string& value) { flags_[key] = value; }
void RunConfig::set_default(const std::string& key, const std::string& value) { defaults_[key] = value; }

std::string RunConfig::env_name(const std::string& key) {
  std::string out = "RETROKIT_";
  for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::optional<std::string> RunConfig::get(const std::string& key) const {
  if (auto it = flags_.find(key); it != flags_.end()) return it->second;
  if (const char* env = std::getenv(env_name(key).c_str())) return std::string(env);
  if (auto it = file_.find(key); it != file_.end()) return it->second;
  if (auto it = defaults_.find(key); it != defaults_.end()) return it->second;
  return std::nullopt;
}

std::string RunConfig::get_or(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const double d = std::stod(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return d;
  } catch (const std::exception&) {
    throw Error("setting " + key + " is not a number: " + *v);
  }
}

long RunConfig::get_long(const std::string& key, long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const long n = std::stol(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return n;
  } catch (const std::exception&) {
    throw Error("setting " + key + " is not an integer: " + *v);
  }
}

std::string RunConfig::source(const std::string& key) const {
  if (flags_.count(key)) return "flag";
  if (std::getenv(env_name(key).c_str())) return "env";
  if (file_.count(key)) return "file";
  if (defaults_.count(key)) return "default";
  return "unset";
}

nlohmann::json RunConfig::resolved() const {
  std::set<std::string> keys;
  for (const auto* layer : {&flags_, &file_, &defaults_}) {
    for (const auto& [k, v] : *layer) keys.insert(k);
  }
  nlohmann::json out = nlohmann::json::object();
  for (const auto& k : keys) {
    // Credentials never go into reports.
    if (k.find("api_key") != std::string::npos) continue;
    out[k] = {{"value", *get(k)}, {"source", source(k)}};
  }
  if (!file_path_.empty()) out["config_file"] = file_path_;
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 unavailable");
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

}  // namespace retrokit::cli
