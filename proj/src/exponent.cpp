// SPDX-License-Identifier: Apache-2.0
#include "detex/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "detex/csv.hpp"
#include "detex/errors.hpp"

namespace detex {

namespace detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498948482;  // 1/phi
constexpr double kMeanMargin = 1e-12;              // means this close to 0 count as 0
constexpr double kExpansionCap = 1e6;              // bracket expansion limit for t < 0

}  // namespace

double cgf_slope(const CgfKernel& kernel, int hypothesis, double t) {
  double h = 1e-6 * (1.0 + std::abs(t));
  // Keep the stencil strictly inside the domain of finiteness (matters only
  // at extreme SNR where t_sup is tiny).
  const double room = kernel.t_sup(hypothesis) - t;
  if (room < 4.0 * h) h = 0.25 * room;
  return (kernel.lambda(hypothesis, t + h) - kernel.lambda(hypothesis, t - h)) / (2.0 * h);
}

// Concave 1-D maximization: golden-section shrink to a moderate bracket, then
// safeguarded Newton on central-difference derivatives. Convergence when the
// derivative magnitude drops below 1e-9 or the bracket width below
// 1e-12*max(1,|t|). The best evaluated point is always returned.
MaximizeOutcome maximize_concave(const std::function<double(double)>& phi, double lo, double hi) {
  MaximizeOutcome out;
  out.value = -kInf;
  auto probe = [&](double t) {
    const double v = phi(t);
    ++out.evals;
    if (v > out.value) {
      out.value = v;
      out.t = t;
    }
    return v;
  };

  double a = lo, b = hi;
  probe(a);
  probe(b);
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = probe(x1), f2 = probe(x2);
  const double coarse = 1e-3 * std::max(1.0, std::abs(hi - lo));
  for (int it = 0; it < 200 && b - a > coarse; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = probe(x2);
    }
  }

  double t = out.t;
  for (int it = 0; it < 100; ++it) {
    if (b - a <= 1e-12 * std::max(1.0, std::abs(t))) {
      out.converged = true;
      break;
    }
    double h = 1e-6 * (1.0 + std::abs(t));
    t = std::clamp(t, a, b);
    if (t - a < 2.0 * h || b - t < 2.0 * h) h = std::max((b - a) * 0.1, 1e-14);
    const double fm = probe(t - h), f0 = probe(t), fp = probe(t + h);
    if (!std::isfinite(fm) || !std::isfinite(f0) || !std::isfinite(fp)) {
      // Edge of the domain: fall back to pure golden on the current bracket.
      if (!std::isfinite(fp)) b = t + h;
      if (!std::isfinite(fm)) a = t - h;
      t = 0.5 * (a + b);
      continue;
    }
    const double d1 = (fp - fm) / (2.0 * h);
    const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
    if (std::abs(d1) < 1e-9) {
      out.converged = true;
      break;
    }
    // Maintain the bracket from the derivative sign, then take a Newton step
    // when curvature cooperates, bisection otherwise.
    if (d1 > 0.0)
      a = t;
    else
      b = t;
    double next = d2 < 0.0 ? t - d1 / d2 : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    // A Newton step at the finite-difference noise floor means the stationary
    // point is resolved as finely as the stencil allows.
    if (std::abs(next - t) <= 1e-13 * (1.0 + std::abs(t))) {
      out.converged = true;
      break;
    }
    t = next;
  }
  return out;
}

namespace {

// Expand the left bracket end until the objective's slope turns positive,
// i.e. Lambda'(-T) drops below z; the maximizer of z*t - Lambda(t) then lies
// inside [-T, 0]. Returns false when the cap is hit (divergent transform).
bool expand_left(const CgfKernel& kernel, int hypothesis, double z, double& t_lo) {
  t_lo = 1.0;
  while (t_lo <= kExpansionCap) {
    if (cgf_slope(kernel, hypothesis, -t_lo) < z) return true;
    t_lo *= 2.0;
  }
  return false;
}

double upper_bracket_end(const CgfKernel& kernel, int hypothesis) {
  const double t_sup = kernel.t_sup(hypothesis);
  return t_sup - std::max(1e-6 * t_sup, 2.0 * CgfKernel::kDomainMargin);
}

}  // namespace

ExponentReport exponents_of_kernel(const CgfKernel& kernel) {
  ExponentReport report;
  report.mean0 = cgf_slope(kernel, 0, 0.0);
  report.mean1 = cgf_slope(kernel, 1, 0.0);
  const bool mean0_negative = report.mean0 < -kMeanMargin;
  const bool mean1_positive = report.mean1 > kMeanMargin;
  report.feasible = mean0_negative && mean1_positive;

  if (mean0_negative) {
    // E0 = I_0(0) = sup_{t in [0, t0_sup)} -Lambda_0(t)
    auto mx = maximize_concave([&](double t) { return -kernel.lambda(0, t); }, 0.0,
                               upper_bracket_end(kernel, 0));
    if (!mx.converged)
      throw NumericalError("exponents: maximizer for E0 did not converge (bracket [0, " +
                           std::to_string(upper_bracket_end(kernel, 0)) + "], best t " +
                           std::to_string(mx.t) + ")");
    report.e0 = std::max(0.0, mx.value);
    report.t0_star = mx.t;
  }
  if (mean1_positive) {
    // E1 = I_1(0) = sup_{t <= 0} -Lambda_1(t); expand until the slope test
    // brackets the stationary point.
    double t_lo = 0.0;
    if (!expand_left(kernel, 1, 0.0, t_lo))
      throw NumericalError(
          "exponents: E1 bracket expansion hit the cap 1e6; Lambda_1 slope never changed sign");
    auto mx = maximize_concave([&](double t) { return -kernel.lambda(1, t); }, -t_lo, 0.0);
    if (!mx.converged)
      throw NumericalError("exponents: maximizer for E1 did not converge (bracket [-" +
                           std::to_string(t_lo) + ", 0], best t " + std::to_string(mx.t) + ")");
    report.e1 = std::max(0.0, mx.value);
    report.t1_star = mx.t;
  }
  report.e = report.feasible ? std::min(report.e0, report.e1) : 0.0;
  return report;
}

}  // namespace detail

double rate(const CgfPair& cgf, int hypothesis, double z) {
  const detail::CgfKernel kernel = cgf.kernel();
  const double mean = detail::cgf_slope(kernel, hypothesis, 0.0);
  if (std::abs(z - mean) <= 1e-12 * std::max(1.0, std::abs(mean))) return 0.0;

  auto objective = [&](double t) { return z * t - kernel.lambda(hypothesis, t); };
  detail::MaximizeOutcome mx;
  if (z > mean) {
    mx = detail::maximize_concave(objective, 0.0, detail::upper_bracket_end(kernel, hypothesis));
  } else {
    double t_lo = 0.0;
    if (!detail::expand_left(kernel, hypothesis, z, t_lo))
      return std::numeric_limits<double>::infinity();  // slope never reaches z: I(z) diverges
    mx = detail::maximize_concave(objective, -t_lo, 0.0);
  }
  return std::max(0.0, mx.value);
}

ExponentReport exponents(const DetectorModel& detector, const Quadrature& quad) {
  // Degenerate case theta2 = 0: the hypotheses coincide, every error exponent
  // is 0 and no detector is feasible.
  if (detector.noise.theta2 == 0.0) return ExponentReport{};
  return detail::exponents_of_kernel(cgf_for(detector, quad).kernel());
}

double are(const DetectorModel& d1, const DetectorModel& d2, const Quadrature& quad) {
  const ExponentReport reference = exponents(d2, quad);
  if (!(reference.e > 0.0))
    throw std::domain_error("are: reference detector has zero error exponent; ARE is undefined");
  return exponents(d1, quad).e / reference.e;
}

std::vector<AreSweepRow> are_sweep(DetectorFamily family1, DetectorFamily family2,
                                   const std::function<Spectrum(double)>& make_spectrum,
                                   const std::vector<double>& params,
                                   const std::vector<double>& snrs_db, double sigma2,
                                   const Quadrature& quad) {
  if (params.empty() || snrs_db.empty())
    throw std::invalid_argument("are_sweep: parameter and SNR grids must be nonempty");
  if (family1 == DetectorFamily::kBanded || family2 == DetectorFamily::kBanded)
    throw std::invalid_argument("are_sweep: banded detectors are swept via grid search");

  auto detector_for = [](DetectorFamily family, const NoiseModel& noise, const Spectrum& sp) {
    return family == DetectorFamily::kOptimal ? DetectorModel::optimal(noise, sp)
                                              : DetectorModel::simple_quadratic(noise, sp);
  };

  std::vector<AreSweepRow> rows;
  rows.reserve(params.size() * snrs_db.size());
  for (double param : params) {
    for (double snr_db : snrs_db) {
      AreSweepRow row;
      row.param = param;
      row.snr_db = snr_db;
      try {
        const Spectrum sp = make_spectrum(param);
        const NoiseModel noise = NoiseModel::from_snr_db(snr_db, sigma2);
        const ExponentReport r1 = exponents(detector_for(family1, noise, sp), quad);
        const ExponentReport r2 = exponents(detector_for(family2, noise, sp), quad);
        row.e1 = r1.e;
        row.e2 = r2.e;
        row.feasible1 = r1.feasible;
        row.feasible2 = r2.feasible;
        if (!(r2.e > 0.0)) throw std::domain_error("reference exponent is zero");
        row.are = r1.e / r2.e;
      } catch (const std::exception& err) {
        row.ok = false;
        row.note = err.what();
        row.are = std::numeric_limits<double>::quiet_NaN();
        row.e1 = row.e2 = std::numeric_limits<double>::quiet_NaN();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string are_sweep_csv(const std::vector<AreSweepRow>& rows) {
  std::string out = "param,snr_db,E_detector1,E_detector2,ARE,feasible1,feasible2\n";
  for (const AreSweepRow& r : rows) {
    out += csv_double(r.param) + ',' + csv_double(r.snr_db) + ',' + csv_double(r.e1) + ',' +
           csv_double(r.e2) + ',' + csv_double(r.are) + ',' + csv_bool(r.feasible1) + ',' +
           csv_bool(r.feasible2) + '\n';
  }
  return out;
}

}  // namespace detex
