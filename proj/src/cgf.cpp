// SPDX-License-Identifier: Apache-2.0
#include "detex/cgf.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "detex/errors.hpp"
#include "detex/finite_sim.hpp"

namespace detex {

namespace {

// Node grid k*2pi/N over the full circle. Complements the quadrature
// midpoints when scanning for sups: band-edge extrema of the symbols sit at
// omega = 0 and pi, which the midpoint grid excludes by construction.
Eigen::ArrayXd endpoint_grid(const Quadrature& quad) {
  const int n = quad.panels();
  return Eigen::ArrayXd::LinSpaced(n, 0, n - 1) * (kTwoPi / n);
}

Eigen::ArrayXd sample_on(const Spectrum& spectrum, const Eigen::ArrayXd& omega) {
  Eigen::ArrayXd out(omega.size());
  for (Eigen::Index i = 0; i < omega.size(); ++i) out[i] = spectrum.eval(omega[i]);
  return out;
}

// Product of the banded symmetric Toeplitz kernel with a dense matrix,
// accumulated band by band (row shifts); O((2m+1) n^2).
Eigen::MatrixXd banded_times_dense(std::span<const double> b, const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd y = b[0] * x;
  for (Eigen::Index l = 1; l < static_cast<Eigen::Index>(b.size()); ++l) {
    y.topRows(n - l) += b[l] * x.bottomRows(n - l);
    y.bottomRows(n - l) += b[l] * x.topRows(n - l);
  }
  return y;
}

}  // namespace

CgfPair cgf_simple_quadratic(const NoiseModel& noise, const Spectrum& spectrum,
                             const Quadrature& quad) {
  if (!(noise.theta2 > 0.0))
    throw std::invalid_argument("cgf_simple_quadratic: requires theta2 > 0");
  const double s2 = noise.sigma2, th2 = noise.theta2;
  const double sup_m = spectrum.bounds().sup;

  CgfPair c;
  c.linear_ = 0.5 * std::log(s2 / (s2 + th2));
  c.u0_ = Eigen::ArrayXd::Constant(quad.panels(), th2 / (s2 + th2));
  const Eigen::ArrayXd f = spectrum.sample(quad);
  c.u1_ = th2 * (s2 + th2 * f) / (s2 * (s2 + th2));
  c.t0_sup_ = (s2 + th2) / th2;
  c.t1_sup_ = s2 * (s2 + th2) / (th2 * (s2 + th2 * sup_m));
  return c;
}

CgfPair cgf_optimal(const NoiseModel& noise, const Spectrum& spectrum, const Quadrature& quad) {
  if (!(noise.theta2 > 0.0)) throw std::invalid_argument("cgf_optimal: requires theta2 > 0");
  const double s2 = noise.sigma2, th2 = noise.theta2;
  const double sup_m = spectrum.bounds().sup;

  CgfPair c;
  const Eigen::ArrayXd f = spectrum.sample(quad);
  c.linear_ = 0.5 * (s2 / (s2 + th2 * f)).log().mean();
  c.u0_ = th2 * f / (s2 + th2 * f);
  c.u1_ = (th2 / s2) * f;
  c.t0_sup_ = (s2 + th2 * sup_m) / (th2 * sup_m);
  c.t1_sup_ = s2 / (th2 * sup_m);
  return c;
}

CgfPair cgf_banded(const NoiseModel& noise, const Spectrum& spectrum, std::span<const double> b,
                   const Quadrature& quad) {
  const double s2 = noise.sigma2, th2 = noise.theta2;

  const Eigen::ArrayXd w_end = endpoint_grid(quad);
  const Eigen::ArrayXd g_mid = banded_symbol(b, quad.nodes());
  const Eigen::ArrayXd g_end = banded_symbol(b, w_end);
  if (!(g_mid.minCoeff() > 0.0) || !(g_end.minCoeff() > 0.0))
    throw std::invalid_argument("cgf_banded: symbol g_m must be strictly positive on the grid");

  const Eigen::ArrayXd f_mid = spectrum.sample(quad);
  const Eigen::ArrayXd f_end = sample_on(spectrum, w_end);

  CgfPair c;
  c.linear_ = 0.5 * (s2 / (s2 + th2 * f_mid)).log().mean();
  c.u0_ = s2 * g_mid;
  c.u1_ = (s2 + th2 * f_mid) * g_mid;
  const double sup_g = std::max(g_mid.maxCoeff(), g_end.maxCoeff());
  const double sup_u1 = std::max(c.u1_.maxCoeff(), ((s2 + th2 * f_end) * g_end).maxCoeff());
  c.t0_sup_ = 1.0 / (s2 * sup_g);
  c.t1_sup_ = 1.0 / sup_u1;
  return c;
}

CgfPair cgf_for(const DetectorModel& detector, const Quadrature& quad) {
  switch (detector.family) {
    case DetectorFamily::kOptimal:
      return cgf_optimal(detector.noise, detector.spectrum, quad);
    case DetectorFamily::kSimpleQuadratic:
      return cgf_simple_quadratic(detector.noise, detector.spectrum, quad);
    case DetectorFamily::kBanded:
      return cgf_banded(detector.noise, detector.spectrum, detector.banded_b, quad);
  }
  throw std::invalid_argument("cgf_for: unknown detector family");
}

double finite_cgf(const DetectorModel& detector, int n, double t, int hypothesis) {
  constexpr int kMaxN = 8192;
  if (n < 1) throw std::invalid_argument("finite_cgf: n must be positive");
  if (n > kMaxN)
    throw std::length_error("finite_cgf: n = " + std::to_string(n) + " exceeds the cap " +
                            std::to_string(kMaxN));
  if (hypothesis != 0 && hypothesis != 1)
    throw std::invalid_argument("finite_cgf: hypothesis must be 0 or 1");

  const double s2 = detector.noise.sigma2, th2 = detector.noise.theta2;
  const Eigen::MatrixXd sigma1 =
      s2 * Eigen::MatrixXd::Identity(n, n) + th2 * signal_covariance(detector.spectrum, n);

  // Deterministic offset of the statistic and the eigenvalues of Q * Sigma_j
  // (Lemma-style exact finite-n CGF). Simple and optimal kernels are matrix
  // functions of Sigma_1, so Q Sigma_1 = c Sigma_1 resp. sigma^-2 Sigma_1 - I
  // and one eigensolve of Sigma_1 covers both hypotheses; the banded kernel
  // does not commute with Sigma_1 and uses the Cholesky congruence L^T Q L.
  double offset = 0.0;
  Eigen::ArrayXd lambda;
  switch (detector.family) {
    case DetectorFamily::kSimpleQuadratic: {
      offset = 0.5 * std::log(s2 / (s2 + th2));
      const double c = th2 / (s2 * (s2 + th2));
      if (hypothesis == 0) {
        lambda = Eigen::ArrayXd::Constant(n, c * s2);
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma1, Eigen::EigenvaluesOnly);
        lambda = c * es.eigenvalues().array();
      }
      break;
    }
    case DetectorFamily::kOptimal: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma1, Eigen::EigenvaluesOnly);
      const Eigen::ArrayXd ev = es.eigenvalues().array();
      offset = 0.5 * (s2 / ev).log().mean();
      lambda = hypothesis == 0 ? (1.0 - s2 / ev).eval() : (ev / s2 - 1.0).eval();
      break;
    }
    case DetectorFamily::kBanded: {
      Eigen::LLT<Eigen::MatrixXd> llt(sigma1);
      if (llt.info() != Eigen::Success)
        throw NumericalError("finite_cgf: Cholesky of Sigma_1 failed");
      const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
      offset = (n * std::log(s2) - logdet) / (2.0 * n);
      Eigen::MatrixXd m;
      if (hypothesis == 0) {
        m = s2 * banded_quadratic_matrix(detector.banded_b, n);
      } else {
        const Eigen::MatrixXd ql = banded_times_dense(detector.banded_b, llt.matrixL());
        m = llt.matrixL().transpose() * ql;
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
      lambda = es.eigenvalues().array();
      break;
    }
  }

  const Eigen::ArrayXd arg = 1.0 - t * lambda;
  if (!(arg.minCoeff() > 0.0)) return std::numeric_limits<double>::infinity();
  return t * offset - 0.5 * arg.log().sum() / static_cast<double>(n);
}

}  // namespace detex
