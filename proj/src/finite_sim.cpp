// SPDX-License-Identifier: Apache-2.0
#include "detex/finite_sim.hpp"

#include <cmath>
#include <random>

#include "detex/csv.hpp"
#include "detex/errors.hpp"

namespace detex {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Per-(n, hypothesis, trial) seed stream: trials are independent of execution
// order and schedule.
std::uint64_t cell_seed(std::uint64_t seed, int n, int hypothesis, std::int64_t trial) {
  std::uint64_t s = splitmix64(seed ^ 0x5deece11ull);
  s = splitmix64(s ^ static_cast<std::uint64_t>(n));
  s = splitmix64(s ^ static_cast<std::uint64_t>(hypothesis + 1));
  s = splitmix64(s ^ static_cast<std::uint64_t>(trial));
  return s;
}

struct Interval {
  double lo, hi;
};

// 95% Wilson score interval; well-behaved at 0 and n counts.
Interval wilson95(std::int64_t count, std::int64_t n) {
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(count) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace

Eigen::MatrixXd signal_covariance(const Spectrum& spectrum, int n) {
  if (n < 1) throw std::invalid_argument("signal_covariance: n must be positive");
  Eigen::VectorXd r(n);
  for (int k = 0; k < n; ++k) r[k] = spectrum.autocorrelation(k);
  Eigen::MatrixXd sigma(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sigma(i, j) = r[std::abs(i - j)];
  return sigma;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> toeplitz_covariances(const Spectrum& spectrum,
                                                                 const NoiseModel& noise, int n,
                                                                 int max_n) {
  if (n < 1 || n > max_n)
    throw std::length_error("toeplitz_covariances: n must lie in [1, " + std::to_string(max_n) +
                            "]");
  Eigen::MatrixXd sigma0 = noise.sigma2 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sigma1 = sigma0 + noise.theta2 * signal_covariance(spectrum, n);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma1);
  if (llt.info() != Eigen::Success)
    throw NumericalError("toeplitz_covariances: Sigma_1 is not positive definite");
  return {std::move(sigma0), std::move(sigma1)};
}

Eigen::MatrixXd banded_quadratic_matrix(std::span<const double> b, int n) {
  if (b.empty()) throw std::invalid_argument("banded_quadratic_matrix: empty coefficients");
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < static_cast<int>(b.size()); ++l) {
      if (i + l < n) {
        q(i, i + l) = b[l];
        q(i + l, i) = b[l];
      }
    }
  return q;
}

StatisticEvaluator::StatisticEvaluator(const DetectorModel& detector, int n)
    : family_(detector.family), n_(n), sigma2_(detector.noise.sigma2), b_(detector.banded_b) {
  if (n < 1) throw std::invalid_argument("StatisticEvaluator: n must be positive");
  const double s2 = detector.noise.sigma2, th2 = detector.noise.theta2;
  switch (family_) {
    case DetectorFamily::kSimpleQuadratic:
      offset_ = 0.5 * std::log(s2 / (s2 + th2));
      simple_coeff_ = th2 / (2.0 * n * s2 * (s2 + th2));
      break;
    case DetectorFamily::kOptimal:
    case DetectorFamily::kBanded: {
      const Eigen::MatrixXd sigma1 =
          s2 * Eigen::MatrixXd::Identity(n, n) + th2 * signal_covariance(detector.spectrum, n);
      sigma1_llt_.compute(sigma1);
      if (sigma1_llt_.info() != Eigen::Success)
        throw NumericalError("StatisticEvaluator: Cholesky of Sigma_1 failed");
      const double logdet = 2.0 * sigma1_llt_.matrixLLT().diagonal().array().log().sum();
      offset_ = (n * std::log(s2) - logdet) / (2.0 * n);
      break;
    }
  }
}

double StatisticEvaluator::operator()(const Eigen::VectorXd& y) const {
  if (y.size() != n_)
    throw std::invalid_argument("StatisticEvaluator: y has length " + std::to_string(y.size()) +
                                ", expected " + std::to_string(n_));
  switch (family_) {
    case DetectorFamily::kSimpleQuadratic:
      return offset_ + simple_coeff_ * y.squaredNorm();
    case DetectorFamily::kOptimal: {
      // y' Q y with Q = Sigma_0^-1 - Sigma_1^-1, via one Cholesky solve.
      const Eigen::VectorXd q = y / sigma2_ - sigma1_llt_.solve(y);
      return offset_ + y.dot(q) / (2.0 * n_);
    }
    case DetectorFamily::kBanded: {
      // Sequential form of the m-neighbor recursion: O(n*m) products.
      double quad = b_[0] * y.squaredNorm();
      for (int l = 1; l < static_cast<int>(b_.size()); ++l)
        quad += 2.0 * b_[l] * y.head(n_ - l).dot(y.tail(n_ - l));
      return offset_ + quad / (2.0 * n_);
    }
  }
  return 0.0;  // unreachable
}

double statistic(const DetectorModel& detector, const Eigen::VectorXd& y) {
  return StatisticEvaluator(detector, static_cast<int>(y.size()))(y);
}

SimEstimate simulate(const SimConfig& config) {
  if (config.n_list.empty()) throw std::invalid_argument("simulate: n_list must be nonempty");
  for (std::size_t i = 1; i < config.n_list.size(); ++i)
    if (config.n_list[i] <= config.n_list[i - 1])
      throw std::invalid_argument("simulate: n_list must be strictly increasing");
  if (config.trials < 1000)
    throw std::invalid_argument("simulate: need at least 1000 trials per hypothesis");

  const double sigma = std::sqrt(config.detector.noise.sigma2);
  SimEstimate estimate;
  for (int n : config.n_list) {
    auto [sigma0, sigma1] =
        toeplitz_covariances(config.detector.spectrum, config.detector.noise, n);
    const Eigen::MatrixXd chol1 = Eigen::LLT<Eigen::MatrixXd>(sigma1).matrixL();
    const StatisticEvaluator stat(config.detector, n);

    std::int64_t errors[2] = {0, 0};
    Eigen::VectorXd z(n), y(n);
    for (int hyp = 0; hyp < 2; ++hyp) {
      for (std::int64_t trial = 0; trial < config.trials; ++trial) {
        std::mt19937_64 engine(cell_seed(config.seed, n, hyp, trial));
        std::normal_distribution<double> normal;
        for (int i = 0; i < n; ++i) z[i] = normal(engine);
        if (hyp == 0)
          y = sigma * z;
        else
          y.noalias() = chol1.triangularView<Eigen::Lower>() * z;
        const bool decide_h1 = stat(y) >= 0.0;  // ties decide H1
        errors[hyp] += hyp == 0 ? decide_h1 : !decide_h1;
      }
    }

    SimCell cell;
    cell.n = n;
    cell.errors0 = errors[0];
    cell.errors1 = errors[1];
    const double trials = static_cast<double>(config.trials);
    cell.alpha = static_cast<double>(errors[0]) / trials;
    cell.beta = static_cast<double>(errors[1]) / trials;
    cell.pe = 0.5 * (cell.alpha + cell.beta);
    const Interval ia = wilson95(errors[0], config.trials);
    const Interval ib = wilson95(errors[1], config.trials);
    const Interval ip = wilson95(errors[0] + errors[1], 2 * config.trials);
    cell.alpha_lo = ia.lo;
    cell.alpha_hi = ia.hi;
    cell.beta_lo = ib.lo;
    cell.beta_hi = ib.hi;
    cell.pe_lo = ip.lo;
    cell.pe_hi = ip.hi;
    estimate.cells.push_back(cell);
  }

  // Slope of -log(pe_hat) vs n over usable cells, weighted by the
  // delta-method precision of log(pe_hat): w = N*pe/(1-pe), N = 2*trials.
  double sw = 0, swx = 0, swy = 0;
  std::vector<double> xs, ys, ws;
  const double n_draws = 2.0 * static_cast<double>(config.trials);
  for (const SimCell& cell : estimate.cells) {
    if (!(cell.pe > 0.0)) {
      estimate.slope_truncated = true;
      continue;
    }
    const double pe = std::min(cell.pe, 1.0 - 0.5 / n_draws);
    const double w = n_draws * pe / (1.0 - pe);
    xs.push_back(cell.n);
    ys.push_back(-std::log(cell.pe));
    ws.push_back(w);
    sw += w;
    swx += w * cell.n;
    swy += w * ys.back();
  }
  estimate.usable_cells = static_cast<int>(xs.size());
  if (estimate.usable_cells >= 2) {
    const double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
      sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
    }
    estimate.slope = sxy / sxx;
    const double se = std::sqrt(1.0 / sxx);
    estimate.slope_lo = estimate.slope - 1.959963984540054 * se;
    estimate.slope_hi = estimate.slope + 1.959963984540054 * se;
  } else {
    estimate.slope = std::numeric_limits<double>::quiet_NaN();
    estimate.slope_lo = estimate.slope_hi = estimate.slope;
    estimate.slope_truncated = true;
  }
  return estimate;
}

std::string sim_estimate_csv(const SimEstimate& estimate) {
  std::string out = "n,alpha,alpha_lo,alpha_hi,beta,beta_lo,beta_hi,pe,pe_lo,pe_hi\n";
  for (const SimCell& c : estimate.cells) {
    out += std::to_string(c.n) + ',' + csv_double(c.alpha) + ',' + csv_double(c.alpha_lo) + ',' +
           csv_double(c.alpha_hi) + ',' + csv_double(c.beta) + ',' + csv_double(c.beta_lo) + ',' +
           csv_double(c.beta_hi) + ',' + csv_double(c.pe) + ',' + csv_double(c.pe_lo) + ',' +
           csv_double(c.pe_hi) + '\n';
  }
  out += "slope," + csv_double(estimate.slope) + ',' + csv_double(estimate.slope_lo) + ',' +
         csv_double(estimate.slope_hi) + '\n';
  return out;
}

}  // namespace detex
