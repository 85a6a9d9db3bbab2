#pragma once

#include "config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gmt::cli {

enum ExitCode : int { kPass = 0, kViolated = 1, kInputError = 2 };

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
};

const std::vector<std::string>& command_names();

/// Runs one command. Reports go to `log`; files are written into
/// options.out_dir. Returns kPass or kViolated; input problems throw.
int run(const std::string& command, const Config& config, const RunOptions& options, std::ostream& log);

/// Excess against scale for every scan, log-log axes.
std::string excess_svg(const std::vector<std::vector<std::pair<double, double>>>& series);

}  // namespace gmt::cli
