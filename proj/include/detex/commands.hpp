// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "detex/run_config.hpp"

namespace detex {

// Exit codes shared by the library command layer and the CLI binary.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;
inline constexpr int kExitPropertyFailure = 4;

struct CommandResult {
  int exit_code = kExitOk;
  std::string csv;                     // complete artifact; written only on success
  std::vector<std::string> warnings;   // human-readable, go to stderr
};

CommandResult cmd_exponent(const RunConfig& config);
CommandResult cmd_are_sweep(const RunConfig& config);
CommandResult cmd_banded_optimize(const RunConfig& config);
CommandResult cmd_simulate(const RunConfig& config);

// Dispatch on config.command; ConfigError for anything unrecognized.
CommandResult run_command(const RunConfig& config);

}  // namespace detex
