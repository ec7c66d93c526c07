#include <omp.h>

#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "common.hpp"

int main(int argc, char** argv) {
  using namespace retro_tool;
  spdlog::set_default_logger(spdlog::stderr_color_mt("retro"));

  CLI::App app{"retro: retrosynthesis rationale toolkit"};
  app.require_subcommand(1);
  Globals g;
  std::optional<long> seed;
  std::optional<std::string> patterns;
  app.add_option("--config", g.config_path, "TOML settings file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Global seed");
  app.add_option("--workers", g.workers, "Worker threads for parallel kernels (0 = runtime default)");
  app.add_option("--patterns", patterns, "Functional-group pattern table");
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off");
  const auto commands = register_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kFatal;
  }

  try {
    spdlog::set_level(spdlog::level::from_str(g.log_level));
    if (!g.config_path.empty()) g.config.load_file(g.config_path);
    if (seed) g.config.set_flag("run.seed", std::to_string(*seed));
    if (patterns) g.config.set_flag("run.patterns", *patterns);
    g.seed = g.config.get_long("run.seed", 0);
    if (g.workers > 0) omp_set_num_threads(g.workers);
    if (g.workers > 0) g.config.set_flag("run.workers", std::to_string(g.workers));
    for (const auto& c : commands) {
      if (c.app->parsed()) return c.run(g);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return kFatal;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kFatal;
  }
  return kFatal;
}
