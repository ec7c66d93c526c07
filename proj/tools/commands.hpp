#pragma once

#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "common.hpp"

namespace retro_tool {

struct Command {
  CLI::App* app;
  std::function<int(Globals&)> run;
};

/// Registers every subcommand on `app`. The returned runners are called after
/// parsing, once the global configuration has been resolved.
std::vector<Command> register_commands(CLI::App& app);

}  // namespace retro_tool
