// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detex/banded_opt.hpp"

namespace detex {

// One CLI invocation, assembled from an optional flat `key = value` config
// file plus flag overrides. Repeated keys form lists; unknown keys are
// rejected by name; a parsed config round-trips through serialize().
struct RunConfig {
  std::string command;                   // exponent | are-sweep | banded-optimize | simulate
  std::string spectrum = "gauss_markov"; // white | gauss_markov | triangular | tabulated
  std::vector<double> param;             // spectrum parameter grid (a values or M values)
  std::string spectrum_file;             // tabulated samples
  double sigma2 = 1.0;
  std::vector<double> snr_db;
  std::vector<std::string> detector;     // optimal | simple_quadratic | banded:b0,b1,...
  int banded_m = 1;
  std::vector<banded::CoefficientRange> coeff_range;  // per-coefficient "lo,hi,steps"
  int refinement_rounds = 2;
  int quad_panels = 16384;
  std::uint64_t seed = 0;
  std::int64_t trials = 100000;
  std::vector<int> n_list;
  std::string output;                    // CSV path; empty writes to stdout
  bool prop1_check = false;
};

// Throws ConfigError naming the offending key/line on any problem.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Apply one `key = value` override (same keys as the file format).
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

// Canonical text form; parse_config_text(serialize(c)) reproduces c.
std::string serialize(const RunConfig& config);

}  // namespace detex
