#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qsteer::cli {

enum ExitCode : int { kOk = 0, kParseFailure = 2, kPhysicsFailure = 3, kUsageFailure = 4 };

struct RunConfig {
  std::string command;  // run, steer, sweep, report
  std::optional<std::string> input;
  std::optional<std::string> preset;
  std::vector<std::string> settings;
  std::size_t grid = 40;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::optional<std::string> format;  // json or csv; sweep defaults to csv
  std::optional<std::string> out;
  std::string sweep = "v";
  std::string range = "0:1";
  double step = 0.1;
};

/// Parses arguments and dispatches. Help goes to `out`, diagnostics to `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs one configured command; output goes to `config.out` or `out`.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qsteer::cli
