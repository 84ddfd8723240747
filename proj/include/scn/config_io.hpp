#pragma once

// INI-style scenario files: [section] headers with key = value lines.
// Unknown sections or keys are rejected.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "scn/scenario.hpp"

namespace scn {

struct LoadedConfig {
  ScenarioConfig scenario;
  std::vector<Mode> modes;  // simulation.mode may list several, comma separated
};

LoadedConfig parse_config(std::istream& in);
LoadedConfig load_config(const std::filesystem::path& path);

}  // namespace scn
