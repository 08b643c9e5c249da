#pragma once

// Runs one configured experiment and writes its artifacts: CSV tables, a
// summary.json and a plotting script, each stamped with the config echo and
// its hash.

#include "linewalk/config.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace linewalk {

struct Verdict {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunResult {
  std::vector<std::filesystem::path> files;  // in the order written
  std::vector<Verdict> verdicts;
  Json summary;
};

struct RunOptions {
  std::filesystem::path output_dir = "linewalk-out";
  unsigned threads = 1;           // outputs do not depend on it
  std::ostream* log = nullptr;    // progress lines, if given
};

/// Numeric failures (a stopping cap breached by too many runs, a chart that
/// cannot be fitted) propagate as exceptions; failed verdicts do not.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options);

/// The plotting script written next to the CSVs.
std::string plot_script();

/// Reads a scenario from a config file, a summary.json or any CSV written by
/// run_scenario; the latter two must carry a hash matching their echo.
ScenarioConfig load_scenario(const std::filesystem::path& file);

}  // namespace linewalk
