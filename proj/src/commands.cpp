// SPDX-License-Identifier: Apache-2.0
#include "detex/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detex/csv.hpp"
#include "detex/errors.hpp"
#include "detex/finite_sim.hpp"

namespace detex {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> default_params(const std::string& spectrum) {
  std::vector<double> params;
  if (spectrum == "gauss_markov")
    for (int i = 0; i <= 19; ++i) params.push_back(0.05 * i);
  else if (spectrum == "triangular")
    for (int m = 1; m <= 10; ++m) params.push_back(m);
  else
    params.push_back(0.0);  // white/tabulated have no sweep parameter
  return params;
}

// Spectrum factory for one sweep; loads a tabulated file once up front.
class SpectrumSource {
 public:
  SpectrumSource(const RunConfig& config, std::vector<std::string>& warnings)
      : kind_(config.spectrum) {
    if (kind_ == "tabulated") {
      if (config.spectrum_file.empty())
        throw ConfigError("config key 'spectrum_file': required for tabulated spectra");
      Spectrum::Tabulated loaded = Spectrum::load_tabulated(config.spectrum_file);
      if (loaded.renormalization_warning)
        warnings.push_back("tabulated spectrum renormalized by factor " +
                           csv_double(loaded.scale) + " (unit-power correction exceeded 1%)");
      tabulated_ = loaded.spectrum;
    }
  }

  Spectrum make(double param) const {
    if (kind_ == "white") return Spectrum::white();
    if (kind_ == "gauss_markov") return Spectrum::gauss_markov(param);
    if (kind_ == "triangular") {
      const int m = static_cast<int>(std::lround(param));
      if (std::abs(param - m) > 1e-9)
        throw ConfigError("config key 'param': triangular correlation length must be an integer");
      return Spectrum::triangular(m);
    }
    return tabulated_;
  }

 private:
  std::string kind_;
  Spectrum tabulated_;
};

DetectorModel make_detector(const std::string& spec, const NoiseModel& noise,
                            const Spectrum& spectrum) {
  if (spec == "optimal") return DetectorModel::optimal(noise, spectrum);
  if (spec == "simple_quadratic") return DetectorModel::simple_quadratic(noise, spectrum);
  if (spec.rfind("banded:", 0) == 0) {
    std::vector<double> b;
    std::string coeffs = spec.substr(7);
    std::size_t pos = 0;
    while (pos != std::string::npos) {
      const std::size_t comma = coeffs.find(',', pos);
      const std::string tok =
          coeffs.substr(pos, comma == std::string::npos ? comma : comma - pos);
      try {
        b.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("config key 'detector': bad banded coefficient '" + tok + "'");
      }
      pos = comma == std::string::npos ? comma : comma + 1;
    }
    return DetectorModel::banded(noise, spectrum, std::move(b));
  }
  throw ConfigError("config key 'detector': unknown detector '" + spec + "'");
}

DetectorFamily family_of(const std::string& spec) {
  if (spec == "optimal") return DetectorFamily::kOptimal;
  if (spec == "simple_quadratic") return DetectorFamily::kSimpleQuadratic;
  throw ConfigError("config key 'detector': ARE sweeps support 'optimal' and 'simple_quadratic', got '" +
                    spec + "'");
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& ch : out)
    if (ch == ':' || ch == ',') ch = '_';
  return out;
}

}  // namespace

CommandResult cmd_exponent(const RunConfig& config) {
  CommandResult result;
  SpectrumSource source(config, result.warnings);
  const Quadrature quad(config.quad_panels);

  std::vector<double> params = config.param.empty() ? default_params(config.spectrum) : config.param;
  std::vector<double> snrs = config.snr_db.empty() ? std::vector<double>{10.0} : config.snr_db;
  std::vector<std::string> detectors = config.detector.empty()
                                           ? std::vector<std::string>{"optimal", "simple_quadratic"}
                                           : config.detector;

  std::string csv = "param,snr_db";
  for (const std::string& d : detectors) {
    const std::string name = sanitize(d);
    csv += ",E0_" + name + ",E1_" + name + ",E_" + name + ",feasible_" + name;
  }
  csv += '\n';

  for (double snr : snrs) {
    for (double param : params) {
      csv += csv_double(param) + ',' + csv_double(snr);
      const NoiseModel noise = NoiseModel::from_snr_db(snr, config.sigma2);
      for (const std::string& d : detectors) {
        try {
          const Spectrum sp = source.make(param);
          const ExponentReport r = exponents(make_detector(d, noise, sp), quad);
          csv += ',' + csv_double(r.e0) + ',' + csv_double(r.e1) + ',' + csv_double(r.e) + ',' +
                 csv_bool(r.feasible);
        } catch (const ConfigError&) {
          throw;  // bad configuration aborts the whole run
        } catch (const std::exception& err) {
          csv += std::string(",") + csv_double(kNaN) + ',' + csv_double(kNaN) + ',' +
                 csv_double(kNaN) + ",0";
          result.warnings.push_back("cell (param " + csv_double(param) + ", snr " +
                                    csv_double(snr) + ", " + d + ") failed: " + err.what());
        }
      }
      csv += '\n';
    }
  }
  result.csv = std::move(csv);
  return result;
}

CommandResult cmd_are_sweep(const RunConfig& config) {
  CommandResult result;
  SpectrumSource source(config, result.warnings);
  const Quadrature quad(config.quad_panels);

  std::vector<double> params = config.param.empty() ? default_params(config.spectrum) : config.param;
  std::vector<double> snrs =
      config.snr_db.empty() ? std::vector<double>{0.0, 10.0, 20.0, 30.0} : config.snr_db;
  if (config.prop1_check && std::find(snrs.begin(), snrs.end(), 40.0) == snrs.end())
    snrs.push_back(40.0);

  std::vector<std::string> detectors = config.detector;
  if (detectors.empty()) detectors = {"simple_quadratic", "optimal"};
  if (detectors.size() != 2)
    throw ConfigError("config key 'detector': are-sweep needs exactly two detectors");

  std::vector<AreSweepRow> rows =
      are_sweep(family_of(detectors[0]), family_of(detectors[1]),
                [&](double p) { return source.make(p); }, params, snrs, config.sigma2, quad);
  std::stable_sort(rows.begin(), rows.end(), [](const AreSweepRow& a, const AreSweepRow& b) {
    return a.snr_db != b.snr_db ? a.snr_db < b.snr_db : a.param < b.param;
  });
  for (const AreSweepRow& row : rows)
    if (!row.ok)
      result.warnings.push_back("cell (param " + csv_double(row.param) + ", snr " +
                                csv_double(row.snr_db) + ") failed: " + row.note);
  result.csv = are_sweep_csv(rows);

  if (config.prop1_check) {
    for (const AreSweepRow& row : rows)
      if (row.snr_db == 40.0 && !(row.are >= 0.95)) {
        result.exit_code = kExitPropertyFailure;
        result.warnings.push_back("prop1-check failed: ARE at 40 dB is " + csv_double(row.are) +
                                  " (< 0.95) at param " + csv_double(row.param));
      }
  }
  return result;
}

CommandResult cmd_banded_optimize(const RunConfig& config) {
  CommandResult result;
  SpectrumSource source(config, result.warnings);
  const Quadrature quad(config.quad_panels);

  std::vector<double> params = config.param;
  if (params.empty()) {
    if (config.spectrum == "gauss_markov")
      for (int i = 0; i <= 9; ++i) params.push_back(0.1 * i);
    else
      params = default_params(config.spectrum);
  }
  std::vector<double> snrs = config.snr_db.empty() ? std::vector<double>{0.0, 10.0} : config.snr_db;
  const int m = config.banded_m;

  std::string csv = "param,snr_db,m";
  for (int l = 0; l <= m; ++l) csv += ",b" + std::to_string(l);
  csv += ",E0,E1,E,E_optimal,ARE,cells_evaluated,cells_feasible,found\n";

  for (double snr : snrs) {
    for (double param : params) {
      const NoiseModel noise = NoiseModel::from_snr_db(snr, config.sigma2);
      const Spectrum sp = source.make(param);
      banded::SearchConfig search = banded::SearchConfig::with_defaults(m, noise, sp);
      if (!config.coeff_range.empty()) {
        if (static_cast<int>(config.coeff_range.size()) != m + 1)
          throw ConfigError("config key 'coeff_range': need exactly m+1 = " +
                            std::to_string(m + 1) + " entries");
        search.ranges = config.coeff_range;
      }
      search.refinement_rounds = config.refinement_rounds;

      csv += csv_double(param) + ',' + csv_double(snr) + ',' + std::to_string(m);
      try {
        const banded::SearchResult found = banded::grid_search(search, quad);
        const ExponentReport optimal = exponents(DetectorModel::optimal(noise, sp), quad);
        const double are_vs_optimal =
            found.found && optimal.e > 0.0 ? found.report.e / optimal.e : kNaN;
        for (int l = 0; l <= m; ++l)
          csv += ',' + csv_double(found.found ? found.b_star[l] : kNaN);
        csv += ',' + csv_double(found.report.e0) + ',' + csv_double(found.report.e1) + ',' +
               csv_double(found.report.e) + ',' + csv_double(optimal.e) + ',' +
               csv_double(are_vs_optimal) + ',' + std::to_string(found.cells_evaluated) + ',' +
               std::to_string(found.cells_feasible) + ',' + csv_bool(found.found) + '\n';
        if (!found.found)
          result.warnings.push_back("no feasible cell at (param " + csv_double(param) + ", snr " +
                                    csv_double(snr) + ")");
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& err) {
        for (int l = 0; l <= m + 5; ++l) csv += ',' + csv_double(kNaN);
        csv += ",0,0,0\n";
        result.warnings.push_back("cell (param " + csv_double(param) + ", snr " +
                                  csv_double(snr) + ") failed: " + err.what());
      }
    }
  }
  result.csv = std::move(csv);
  return result;
}

CommandResult cmd_simulate(const RunConfig& config) {
  CommandResult result;
  SpectrumSource source(config, result.warnings);
  const Quadrature quad(config.quad_panels);

  const double param = config.param.empty() ? 0.5 : config.param.front();
  const double snr = config.snr_db.empty() ? 10.0 : config.snr_db.front();
  const std::string detector_spec =
      config.detector.empty() ? "simple_quadratic" : config.detector.front();

  SimConfig sim;
  sim.detector = make_detector(detector_spec, NoiseModel::from_snr_db(snr, config.sigma2),
                               source.make(param));
  sim.n_list = config.n_list.empty() ? std::vector<int>{32, 64, 128, 256, 512} : config.n_list;
  sim.trials = config.trials;
  sim.seed = config.seed;

  const SimEstimate estimate = simulate(sim);
  const ExponentReport analytic = exponents(sim.detector, quad);
  const double ratio = analytic.e > 0.0 ? estimate.slope / analytic.e : kNaN;

  result.csv = sim_estimate_csv(estimate);
  result.csv += "analytic," + csv_double(analytic.e) + ',' + csv_double(ratio) + ',' +
                csv_bool(analytic.feasible) + '\n';
  if (estimate.slope_truncated)
    result.warnings.push_back("slope fitted on " + std::to_string(estimate.usable_cells) +
                              " cells; cells with pe_hat = 0 were dropped");
  return result;
}

CommandResult run_command(const RunConfig& config) {
  if (config.command == "exponent") return cmd_exponent(config);
  if (config.command == "are-sweep") return cmd_are_sweep(config);
  if (config.command == "banded-optimize") return cmd_banded_optimize(config);
  if (config.command == "simulate") return cmd_simulate(config);
  throw ConfigError("config key 'command': missing or unknown command '" + config.command + "'");
}

}  // namespace detex
