#pragma once

#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "retrokit/cli/config.hpp"
#include "retrokit/perception/pattern.hpp"
#include "retrokit/rlvr/forward_model.hpp"

namespace retro_tool {

using json = nlohmann::json;

/// Exit codes shared by every subcommand.
enum Exit : int { kOk = 0, kPartial = 1, kFatal = 2 };

struct Globals {
  std::string config_path;
  std::string log_level = "info";
  long seed = 0;
  int workers = 0;
  std::string patterns;
  retrokit::cli::RunConfig config;
};

/// Writes to a file, or to stdout when the path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path);
  std::ostream& stream() { return file_.is_open() ? file_ : *stdout_; }

 private:
  std::ofstream file_;
  std::ostream* stdout_;
};

std::vector<retrokit::perception::PatternDef> load_patterns(const Globals& g);

/// Template library from every reaction in `path` whose template extracts.
retrokit::retro::TemplateLibrary library_from_corpus(const std::string& path);

/// Forward model chosen by name: "template" (built from `corpus`) or "service".
std::unique_ptr<retrokit::rlvr::ForwardModel> make_forward_model(const std::string& oracle, const std::string& corpus,
                                                                 const Globals& g);

/// Common report header: command, resolved settings and input hashes.
json report_header(const std::string& command, const Globals& g, const std::vector<std::string>& inputs);

void write_report(const json& report, const std::string& path);

std::string default_data(const std::string& name);

}  // namespace retro_tool
