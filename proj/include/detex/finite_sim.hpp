// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "detex/detector.hpp"
#include "detex/exponent.hpp"

namespace detex {

// Signal autocovariance matrix [E{s_i s_j}]_{i,j=1..n} built from
// autocorrelation lags 0..n-1 (symmetric Toeplitz).
Eigen::MatrixXd signal_covariance(const Spectrum& spectrum, int n);

// Observation covariances Sigma_0 = sigma2*I and Sigma_1 = sigma2*I +
// theta2*Sigma_s. Verifies positive definiteness of Sigma_1 (Cholesky);
// throws NumericalError on failure and std::length_error above max_n.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> toeplitz_covariances(const Spectrum& spectrum,
                                                                 const NoiseModel& noise, int n,
                                                                 int max_n = 4096);

// Dense symmetric banded Toeplitz kernel with first row (b0, b1, ..., bm, 0...).
Eigen::MatrixXd banded_quadratic_matrix(std::span<const double> b, int n);

// Normalized test statistic (1/n) log L_n(y) of one detector at sample size
// n, including the deterministic log-determinant offset. Precomputes the
// factorizations once; operator() is O(n^2) for the optimal detector, O(n*m)
// for banded, O(n) for simple quadratic.
class StatisticEvaluator {
 public:
  StatisticEvaluator(const DetectorModel& detector, int n);

  int n() const { return n_; }
  // Value of the statistic at y = 0 (the deterministic part).
  double offset() const { return offset_; }
  double operator()(const Eigen::VectorXd& y) const;

 private:
  DetectorFamily family_;
  int n_;
  double sigma2_;
  double offset_ = 0.0;
  double simple_coeff_ = 0.0;            // theta2 / (2 n sigma2 (sigma2+theta2))
  std::vector<double> b_;                // banded coefficients
  Eigen::LLT<Eigen::MatrixXd> sigma1_llt_;  // optimal only
};

double statistic(const DetectorModel& detector, const Eigen::VectorXd& y);

struct SimConfig {
  DetectorModel detector;
  std::vector<int> n_list;          // strictly increasing sample sizes
  std::int64_t trials = 100000;     // per hypothesis and per n; >= 1000
  std::uint64_t seed = 0;
};

struct SimCell {
  int n = 0;
  std::int64_t errors0 = 0, errors1 = 0;  // false alarms / misses observed
  double alpha = 0, alpha_lo = 0, alpha_hi = 0;
  double beta = 0, beta_lo = 0, beta_hi = 0;
  double pe = 0, pe_lo = 0, pe_hi = 0;    // pe = (alpha+beta)/2
};

struct SimEstimate {
  std::vector<SimCell> cells;
  // Weighted least-squares slope of -log(pe_hat) against n over cells with
  // pe_hat > 0; NaN when fewer than two cells are usable.
  double slope = 0, slope_lo = 0, slope_hi = 0;
  int usable_cells = 0;
  bool slope_truncated = false;  // some cells had pe_hat = 0 and were dropped
};

// Seeded, reproducible Monte Carlo estimate of false-alarm/miss/average error
// probabilities under the zero-threshold decision rule (ties decide H1).
// Trials draw y by Cholesky sampling; the per-(n, hypothesis, trial) seed
// stream makes results independent of execution order.
SimEstimate simulate(const SimConfig& config);

// Rows `n,alpha,alpha_lo,alpha_hi,beta,beta_lo,beta_hi,pe,pe_lo,pe_hi`
// followed by the footer line `slope,<slope>,<slope_lo>,<slope_hi>`.
std::string sim_estimate_csv(const SimEstimate& estimate);

}  // namespace detex
