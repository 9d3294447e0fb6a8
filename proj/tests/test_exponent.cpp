// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "detex/errors.hpp"
#include "detex/exponent.hpp"

using namespace detex;

namespace {

const NoiseModel kNoise10dB{1.0, 10.0};
const double kInf = std::numeric_limits<double>::infinity();

// Stationary point of the simple-quadratic Lambda_0 in closed form:
// t* = (1 + r/log(1-r))/r with r = theta2/(sigma2+theta2), E0 = -Lambda_0(t*).
struct ClosedFormE0 {
  double t_star;
  double e0;
};
ClosedFormE0 simple_e0_closed_form(double sigma2, double theta2) {
  const double r = theta2 / (sigma2 + theta2);
  const double t_star = (1.0 + r / std::log(1.0 - r)) / r;
  const double lambda0 = 0.5 * t_star * std::log(1.0 - r) - 0.5 * std::log(1.0 - t_star * r);
  return {t_star, -lambda0};
}

}  // namespace

TEST_CASE("rate vanishes at the mean and matches the E0 code path") {
  const Spectrum sp = Spectrum::gauss_markov(0.5);
  for (const DetectorModel& det : {DetectorModel::simple_quadratic(kNoise10dB, sp),
                                   DetectorModel::optimal(kNoise10dB, sp)}) {
    const CgfPair cgf = cgf_for(det);
    const ExponentReport report = exponents(det);
    for (int hyp : {0, 1}) {
      const double mean = detail::cgf_slope(cgf.kernel(), hyp, 0.0);
      CHECK(rate(cgf, hyp, mean) == 0.0);
    }
    // Two code paths agree: the exponent maximizer and the generic
    // Legendre transform at z = 0.
    CHECK(std::abs(rate(cgf, 0, 0.0) - report.e0) < 1e-10);
    CHECK(std::abs(rate(cgf, 1, 0.0) - report.e1) < 1e-10);
  }
}

TEST_CASE("rate diverges for z outside the derivative range") {
  const CgfPair cgf = cgf_simple_quadratic(kNoise10dB, Spectrum::gauss_markov(0.5));
  // Lambda_0' is bounded below by (1/2)log(sigma2/(sigma2+theta2)) ~ -1.199;
  // the transform at z far below that limit diverges.
  CHECK(rate(cgf, 0, -2.0) == kInf);
  CHECK(rate(cgf, 0, -50.0) == kInf);
  CHECK(std::isfinite(rate(cgf, 0, -1.0)));
}

TEST_CASE("closed-form stationary point of the simple quadratic E0") {
  for (double snr_db : {0.0, 10.0, 20.0, 30.0}) {
    const NoiseModel noise = NoiseModel::from_snr_db(snr_db);
    const auto closed = simple_e0_closed_form(noise.sigma2, noise.theta2);
    const ExponentReport report =
        exponents(DetectorModel::simple_quadratic(noise, Spectrum::gauss_markov(0.5)));
    CHECK(std::abs(report.e0 - closed.e0) < 1e-8);
    CHECK(std::abs(report.t0_star - closed.t_star) < 1e-6);
  }
}

TEST_CASE("mpmath anchors for exponents at (a=0.5, 10 dB)") {
  const Spectrum sp = Spectrum::gauss_markov(0.5);
  const ExponentReport sq = exponents(DetectorModel::simple_quadratic(kNoise10dB, sp));
  CHECK(std::abs(sq.e0 - 0.333891618675096910) < 1e-9);
  CHECK(std::abs(sq.e1 - 0.270291361467432087) < 1e-9);
  CHECK(std::abs(sq.t1_star - -0.280428556894612684) < 1e-6);
  CHECK(sq.e == doctest::Approx(sq.e1).epsilon(1e-14));
  CHECK(sq.feasible);

  const ExponentReport opt = exponents(DetectorModel::optimal(kNoise10dB, sp));
  CHECK(std::abs(opt.e0 - 0.291226282385995433) < 1e-9);
  CHECK(std::abs(opt.e1 - 0.291226282385995433) < 1e-9);
  CHECK(std::abs(opt.t0_star - 0.686071720494995822) < 1e-6);
  CHECK(std::abs(opt.t1_star - -0.313928279505004178) < 1e-6);
}

TEST_CASE("report structure: tilting directions and stationarity") {
  const Spectrum sp = Spectrum::gauss_markov(0.7);
  for (const DetectorModel& det :
       {DetectorModel::simple_quadratic(kNoise10dB, sp), DetectorModel::optimal(kNoise10dB, sp),
        DetectorModel::banded(kNoise10dB, sp, {0.6, 0.15})}) {
    const ExponentReport report = exponents(det);
    REQUIRE(report.feasible);
    CHECK(report.mean0 < 0.0);
    CHECK(report.mean1 > 0.0);
    CHECK(report.t0_star >= 0.0);
    CHECK(report.t1_star <= 0.0);
    CHECK(report.e == doctest::Approx(std::min(report.e0, report.e1)).epsilon(1e-15));
    // Stationarity residual of the maximizers (Lambda_j' at t_j*).
    const CgfPair cgf = cgf_for(det);
    CHECK(std::abs(detail::cgf_slope(cgf.kernel(), 0, report.t0_star)) < 1e-8);
    CHECK(std::abs(detail::cgf_slope(cgf.kernel(), 1, report.t1_star)) < 1e-8);
  }
}

TEST_CASE("optimal detector: false-alarm and miss exponents coincide") {
  for (double a : {0.0, 0.3, 0.6, 0.9}) {
    for (double snr_db : {0.0, 10.0, 20.0, 30.0}) {
      const ExponentReport report = exponents(DetectorModel::optimal(
          NoiseModel::from_snr_db(snr_db), Spectrum::gauss_markov(a)));
      CHECK(std::abs(report.e0 - report.e1) < 1e-6);
    }
  }
}

TEST_CASE("simple quadratic E0 does not depend on the correlation") {
  double reference = 0.0;
  for (double a : {0.0, 0.3, 0.6, 0.9}) {
    const ExponentReport report =
        exponents(DetectorModel::simple_quadratic(kNoise10dB, Spectrum::gauss_markov(a)));
    if (a == 0.0)
      reference = report.e0;
    else
      CHECK(std::abs(report.e0 - reference) < 1e-9);
  }
}

TEST_CASE("detectors coincide on white signals") {
  const Spectrum white = Spectrum::gauss_markov(0.0);
  const ExponentReport sq = exponents(DetectorModel::simple_quadratic(kNoise10dB, white));
  const ExponentReport opt = exponents(DetectorModel::optimal(kNoise10dB, white));
  CHECK(std::abs(sq.e0 - opt.e0) < 1e-9);
  CHECK(std::abs(sq.e1 - opt.e1) < 1e-9);
  CHECK(std::abs(sq.e - opt.e) < 1e-9);
  CHECK(std::abs(sq.t0_star - opt.t0_star) < 1e-6);
}

TEST_CASE("degenerate theta2 = 0 is infeasible with zero exponents") {
  const NoiseModel silent{1.0, 0.0};
  for (const DetectorModel& det :
       {DetectorModel::simple_quadratic(silent, Spectrum::gauss_markov(0.5)),
        DetectorModel::optimal(silent, Spectrum::white()),
        DetectorModel::banded(silent, Spectrum::gauss_markov(0.5), {0.5, 0.1})}) {
    const ExponentReport report = exponents(det);
    CHECK(!report.feasible);
    CHECK(report.e == 0.0);
    CHECK(report.e0 == 0.0);
    CHECK(report.e1 == 0.0);
  }
}

TEST_CASE("are") {
  const Spectrum sp = Spectrum::gauss_markov(0.5);
  const DetectorModel sq = DetectorModel::simple_quadratic(kNoise10dB, sp);
  const DetectorModel opt = DetectorModel::optimal(kNoise10dB, sp);
  CHECK(are(sq, sq) == 1.0);
  CHECK(are(opt, opt) == 1.0);
  const double v = are(sq, opt);
  CHECK(v > 0.0);
  CHECK(v < 1.0);

  // Strong correlation degrades the simple detector more at fixed SNR.
  const NoiseModel zero_db = NoiseModel::from_snr_db(0.0);
  auto are_at = [&](double a) {
    const Spectrum s = Spectrum::gauss_markov(a);
    return are(DetectorModel::simple_quadratic(zero_db, s), DetectorModel::optimal(zero_db, s));
  };
  CHECK(are_at(0.99) < are_at(0.5));

  // Undefined when the reference exponent is zero.
  const NoiseModel silent{1.0, 0.0};
  CHECK_THROWS_AS(are(DetectorModel::simple_quadratic(kNoise10dB, sp),
                      DetectorModel::optimal(silent, sp)),
                  std::domain_error);
}

TEST_CASE("are_sweep: single trivial cell") {
  const auto rows =
      are_sweep(DetectorFamily::kSimpleQuadratic, DetectorFamily::kOptimal,
                [](double a) { return Spectrum::gauss_markov(a); }, {0.0}, {10.0}, 1.0,
                default_quadrature());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].ok);
  CHECK(std::abs(rows[0].are - 1.0) < 1e-6);
}

TEST_CASE("are_sweep: Gauss-Markov grid reproduces the ARE structure") {
  std::vector<double> params;
  for (int i = 0; i <= 19; ++i) params.push_back(0.05 * i);
  const std::vector<double> snrs{0.0, 10.0, 20.0, 30.0};
  const auto rows = are_sweep(DetectorFamily::kSimpleQuadratic, DetectorFamily::kOptimal,
                              [](double a) { return Spectrum::gauss_markov(a); }, params, snrs,
                              1.0, default_quadrature());
  REQUIRE(rows.size() == 80);
  for (const AreSweepRow& row : rows) {
    CHECK(row.ok);
    CHECK(row.feasible1);
    CHECK(row.feasible2);
  }
  // Within each SNR, ARE is non-increasing in a over a >= 0.5.
  for (double snr : snrs) {
    double previous = kInf;
    for (const AreSweepRow& row : rows) {
      if (row.snr_db != snr || row.param < 0.5) continue;
      CHECK(row.are <= previous + 1e-9);
      previous = row.are;
    }
  }
  const std::string csv = are_sweep_csv(rows);
  CHECK(csv.rfind("param,snr_db,E_detector1,E_detector2,ARE,feasible1,feasible2\n", 0) == 0);
}

TEST_CASE("are_sweep: triangular M = 1 is white") {
  std::vector<double> params;
  for (int m = 1; m <= 10; ++m) params.push_back(m);
  const auto rows = are_sweep(DetectorFamily::kSimpleQuadratic, DetectorFamily::kOptimal,
                              [](double m) { return Spectrum::triangular(static_cast<int>(m)); },
                              params, {0.0, 10.0, 20.0, 30.0}, 1.0, default_quadrature());
  REQUIRE(rows.size() == 40);
  for (const AreSweepRow& row : rows)
    if (row.param == 1.0) CHECK(std::abs(row.are - 1.0) < 1e-6);
}

TEST_CASE("are_sweep: per-cell failures are recorded, sweep continues") {
  const auto rows = are_sweep(
      DetectorFamily::kSimpleQuadratic, DetectorFamily::kOptimal,
      [](double a) {
        if (a < 0.0) throw NumericalError("synthetic cell failure");
        return Spectrum::gauss_markov(a);
      },
      {-1.0, 0.5}, {10.0}, 1.0, default_quadrature());
  REQUIRE(rows.size() == 2);
  CHECK(!rows[0].ok);
  CHECK(rows[0].note == "synthetic cell failure");
  CHECK(std::isnan(rows[0].are));
  CHECK(rows[1].ok);
}
