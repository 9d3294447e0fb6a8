// SPDX-License-Identifier: Apache-2.0
#include "detex/banded_opt.hpp"

#include <algorithm>
#include <cmath>

#include "detex/csv.hpp"
#include "detex/errors.hpp"

namespace detex::banded {

namespace {

constexpr double kTie = 1e-12;  // exponent ties resolve lexicographically

Eigen::ArrayXd linspace(const CoefficientRange& r) {
  return Eigen::ArrayXd::LinSpaced(r.steps, r.lo, r.hi);
}

}  // namespace

Limits limits(const NoiseModel& noise, const Spectrum& spectrum, std::span<const double> b,
              const Quadrature& quad) {
  const double s2 = noise.sigma2, th2 = noise.theta2;
  const Eigen::ArrayXd f = spectrum.sample(quad);
  const Eigen::ArrayXd g = banded_symbol(b, quad.nodes());
  const double first_term = 0.5 * (s2 / (s2 + th2 * f)).log().mean();
  return {first_term + 0.5 * s2 * g.mean(), first_term + 0.5 * ((s2 + th2 * f) * g).mean()};
}

bool feasible(const NoiseModel& noise, const Spectrum& spectrum, std::span<const double> b,
              const Quadrature& quad) {
  const Limits l = limits(noise, spectrum, b, quad);
  return l.tbar0 < 0.0 && 0.0 < l.tbar1;
}

ExponentReport cell_exponent(const NoiseModel& noise, const Spectrum& spectrum,
                             std::span<const double> b, const Quadrature& quad) {
  if (!feasible(noise, spectrum, b, quad))
    throw std::invalid_argument(
        "cell_exponent: coefficients are infeasible (limits do not straddle the threshold)");
  return exponents_of_cgf(cgf_banded(noise, spectrum, b, quad));
}

SearchConfig SearchConfig::with_defaults(int m, NoiseModel noise_in, Spectrum spectrum_in) {
  SearchConfig cfg;
  cfg.m = m;
  cfg.ranges.push_back({0.01, 2.0, 64});
  for (int l = 1; l <= m; ++l) cfg.ranges.push_back({-1.0, 1.0, 64});
  cfg.refinement_rounds = 2;
  cfg.noise = noise_in;
  cfg.spectrum = std::move(spectrum_in);
  return cfg;
}

void SearchConfig::validate() const {
  if (m < 0) throw std::invalid_argument("SearchConfig: m must be nonnegative");
  if (static_cast<int>(ranges.size()) != m + 1)
    throw std::invalid_argument("SearchConfig: need exactly m+1 coefficient ranges");
  for (const CoefficientRange& r : ranges) {
    if (r.steps < 3) throw std::invalid_argument("SearchConfig: steps must be >= 3");
    if (!(r.hi > r.lo)) throw std::invalid_argument("SearchConfig: range needs hi > lo");
  }
  if (refinement_rounds < 0)
    throw std::invalid_argument("SearchConfig: refinement_rounds must be >= 0");
}

SearchResult grid_search(const SearchConfig& config, const Quadrature& quad) {
  config.validate();
  const double s2 = config.noise.sigma2, th2 = config.noise.theta2;
  const int m = config.m;
  const int panels = quad.panels();

  // Everything b-independent is sampled once: the spectrum on the quadrature
  // midpoints and on the endpoint grid (the latter catches symbol extrema at
  // omega = 0 and pi for the domain sups), plus per-harmonic cosine tables.
  const Eigen::ArrayXd w_end = Eigen::ArrayXd::LinSpaced(panels, 0, panels - 1) * (kTwoPi / panels);
  const Eigen::ArrayXd f_mid = config.spectrum.sample(quad);
  Eigen::ArrayXd f_end(panels);
  for (int i = 0; i < panels; ++i) f_end[i] = config.spectrum.eval(w_end[i]);
  const Eigen::ArrayXd sigf_mid = s2 + th2 * f_mid;
  const Eigen::ArrayXd sigf_end = s2 + th2 * f_end;
  const double first_term = 0.5 * (s2 / sigf_mid).log().mean();

  std::vector<Eigen::ArrayXd> cos_mid(m + 1), cos_end(m + 1);
  for (int l = 1; l <= m; ++l) {
    cos_mid[l] = (static_cast<double>(l) * quad.nodes()).cos();
    cos_end[l] = (static_cast<double>(l) * w_end).cos();
  }

  SearchResult result;
  double best_e = -1.0;

  Eigen::ArrayXd g_mid(panels), g_end(panels), u0(panels), u1(panels);
  std::vector<double> b(m + 1);

  auto evaluate_cell = [&]() {
    ++result.cells_evaluated;
    g_mid.setConstant(b[0]);
    g_end.setConstant(b[0]);
    for (int l = 1; l <= m; ++l) {
      g_mid += 2.0 * b[l] * cos_mid[l];
      g_end += 2.0 * b[l] * cos_end[l];
    }
    if (!(g_mid.minCoeff() > 0.0) || !(g_end.minCoeff() > 0.0)) return;  // symbol not PD

    u1 = sigf_mid * g_mid;
    const double tbar0 = first_term + 0.5 * s2 * g_mid.mean();
    const double tbar1 = first_term + 0.5 * u1.mean();
    if (!(tbar0 < 0.0 && 0.0 < tbar1)) return;  // infeasible: exponent 0

    ++result.cells_feasible;
    u0 = s2 * g_mid;
    detail::CgfKernel kernel;
    kernel.linear = first_term;
    kernel.u0 = &u0;
    kernel.u1 = &u1;
    kernel.t0_sup = 1.0 / (s2 * std::max(g_mid.maxCoeff(), g_end.maxCoeff()));
    kernel.t1_sup = 1.0 / std::max(u1.maxCoeff(), (sigf_end * g_end).maxCoeff());
    const ExponentReport report = detail::exponents_of_kernel(kernel);

    // Keep the lexicographically smallest b among cells within kTie of the
    // best exponent seen. Cells that drop out of the band stay out: best_e
    // only grows.
    auto lex_less = [&]() {
      return std::lexicographical_compare(b.begin(), b.end(), result.b_star.begin(),
                                          result.b_star.end());
    };
    auto take = [&]() {
      result.found = true;
      result.b_star = b;
      result.report = report;
    };
    if (!result.found) {
      best_e = report.e;
      take();
    } else if (report.e > best_e) {
      best_e = report.e;
      if (result.report.e < best_e - kTie || lex_less()) take();
    } else if (report.e >= best_e - kTie && lex_less()) {
      take();
    }
  };

  std::vector<CoefficientRange> ranges = config.ranges;
  for (int round = 0; round <= config.refinement_rounds; ++round) {
    std::vector<Eigen::ArrayXd> grids;
    grids.reserve(m + 1);
    for (const CoefficientRange& r : ranges) grids.push_back(linspace(r));

    // Odometer over the Cartesian grid, b0 slowest: ascending lexicographic
    // scan, so the tie rule is order-independent.
    std::vector<int> index(m + 1, 0);
    for (;;) {
      for (int l = 0; l <= m; ++l) b[l] = grids[l][index[l]];
      evaluate_cell();
      int l = m;
      while (l >= 0 && ++index[l] == static_cast<int>(grids[l].size())) index[l--] = 0;
      if (l < 0) break;
    }

    if (!result.found) break;  // nothing to refine around
    for (int l = 0; l <= m; ++l) {
      const double width = (ranges[l].hi - ranges[l].lo) / 2.0;
      const double center = result.b_star[l];
      ranges[l].lo = std::max(config.ranges[l].lo, center - width / 2.0);
      ranges[l].hi = std::min(config.ranges[l].hi, center + width / 2.0);
    }
  }
  return result;
}

std::string result_csv_row(int m, const SearchResult& result) {
  std::string out = std::to_string(m);
  for (int l = 0; l <= m; ++l)
    out += ',' + csv_double(result.found ? result.b_star[l]
                                         : std::numeric_limits<double>::quiet_NaN());
  out += ',' + csv_double(result.report.e0) + ',' + csv_double(result.report.e1) + ',' +
         csv_double(result.report.e) + ',' + std::to_string(result.cells_evaluated) + ',' +
         std::to_string(result.cells_feasible);
  return out;
}

}  // namespace detex::banded
