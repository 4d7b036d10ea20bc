// Subcommands of the `hch` tool. Exit codes: 0 pass, 1 assertion or runtime
// failure, 2 usage or configuration error.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hch/config.hpp"

namespace hch {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct CommandOptions {
  std::string config_path;  // empty: all defaults
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::vector<std::string> only;  // check names for `check`
};

const std::vector<std::string>& command_names();
const std::vector<std::string>& check_names();

/// Load the configuration with command-line overrides applied.
RunConfig effective_config(const CommandOptions& opt);

struct CheckResult {
  std::string name;
  std::size_t n_modes = 0;  // 0 for grid-independent checks
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// The invariant suite; `only` restricts it to the named checks.
std::vector<CheckResult> run_checks(const RunConfig& cfg, const std::vector<std::string>& only = {});

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace hch
