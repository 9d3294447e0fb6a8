// SPDX-License-Identifier: Apache-2.0
#include "detex/run_config.hpp"

#include <fstream>
#include <sstream>

#include "detex/errors.hpp"

namespace detex {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw ConfigError("config key '" + key + "': expected a boolean (0/1/true/false), got '" +
                    value + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

}  // namespace

void apply_config_entry(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "command") {
    if (value != "exponent" && value != "are-sweep" && value != "banded-optimize" &&
        value != "simulate")
      throw ConfigError("config key 'command': unknown command '" + value + "'");
    c.command = value;
  } else if (key == "spectrum") {
    if (value != "white" && value != "gauss_markov" && value != "triangular" &&
        value != "tabulated")
      throw ConfigError("config key 'spectrum': unknown spectrum kind '" + value + "'");
    c.spectrum = value;
  } else if (key == "param") {
    c.param.push_back(parse_double(key, value));
  } else if (key == "spectrum_file") {
    c.spectrum_file = value;
  } else if (key == "sigma2") {
    c.sigma2 = parse_double(key, value);
    if (!(c.sigma2 > 0.0)) throw ConfigError("config key 'sigma2': must be positive");
  } else if (key == "snr_db") {
    c.snr_db.push_back(parse_double(key, value));
  } else if (key == "detector") {
    c.detector.push_back(value);
  } else if (key == "banded_m") {
    c.banded_m = static_cast<int>(parse_int(key, value));
    if (c.banded_m < 0) throw ConfigError("config key 'banded_m': must be nonnegative");
  } else if (key == "coeff_range") {
    const auto parts = split(value, ',');
    if (parts.size() != 3)
      throw ConfigError("config key 'coeff_range': expected 'lo,hi,steps', got '" + value + "'");
    banded::CoefficientRange r;
    r.lo = parse_double(key, parts[0]);
    r.hi = parse_double(key, parts[1]);
    r.steps = static_cast<int>(parse_int(key, parts[2]));
    c.coeff_range.push_back(r);
  } else if (key == "refinement_rounds") {
    c.refinement_rounds = static_cast<int>(parse_int(key, value));
    if (c.refinement_rounds < 0)
      throw ConfigError("config key 'refinement_rounds': must be nonnegative");
  } else if (key == "quad_panels") {
    c.quad_panels = static_cast<int>(parse_int(key, value));
    if (c.quad_panels < 2) throw ConfigError("config key 'quad_panels': must be >= 2");
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "trials") {
    c.trials = parse_int(key, value);
    if (c.trials < 1) throw ConfigError("config key 'trials': must be positive");
  } else if (key == "n") {
    c.n_list.push_back(static_cast<int>(parse_int(key, value)));
  } else if (key == "output") {
    c.output = value;
  } else if (key == "prop1_check") {
    c.prop1_check = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  auto emit = [&](const std::string& key, const auto& value) { out << key << " = " << value << "\n"; };
  if (!c.command.empty()) emit("command", c.command);
  emit("spectrum", c.spectrum);
  for (double p : c.param) emit("param", p);
  if (!c.spectrum_file.empty()) emit("spectrum_file", c.spectrum_file);
  emit("sigma2", c.sigma2);
  for (double s : c.snr_db) emit("snr_db", s);
  for (const std::string& d : c.detector) emit("detector", d);
  emit("banded_m", c.banded_m);
  for (const banded::CoefficientRange& r : c.coeff_range) {
    std::ostringstream v;
    v.precision(17);
    v << r.lo << ',' << r.hi << ',' << r.steps;
    emit("coeff_range", v.str());
  }
  emit("refinement_rounds", c.refinement_rounds);
  emit("quad_panels", c.quad_panels);
  emit("seed", c.seed);
  emit("trials", c.trials);
  for (int n : c.n_list) emit("n", n);
  if (!c.output.empty()) emit("output", c.output);
  emit("prop1_check", c.prop1_check ? 1 : 0);
  return out.str();
}

}  // namespace detex
