// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <limits>

#include "detex/detector.hpp"
#include "detex/quadrature.hpp"

namespace detex {

namespace detail {

// Every limiting CGF in this library has the shape
//
//   Lambda_j(t) = linear * t - (1/4pi) int_0^2pi log(1 - t * u_j(w)) dw,
//
// with a family-specific t-proportional constant and positive integrand
// factor u_j sampled on the quadrature grid. The open domain of finiteness is
// (-inf, 1/sup u_j). Views are non-owning; CgfPair owns the arrays.
struct CgfKernel {
  double linear = 0.0;
  const Eigen::ArrayXd* u0 = nullptr;
  const Eigen::ArrayXd* u1 = nullptr;
  double t0_sup = std::numeric_limits<double>::infinity();
  double t1_sup = std::numeric_limits<double>::infinity();

  // Evaluations within kDomainMargin of the boundary (or beyond) signal +inf
  // rather than integrating a near-singular log.
  static constexpr double kDomainMargin = 1e-9;

  double t_sup(int hypothesis) const { return hypothesis == 0 ? t0_sup : t1_sup; }
  double lambda(int hypothesis, double t) const {
    if (t >= t_sup(hypothesis) - kDomainMargin) return std::numeric_limits<double>::infinity();
    const Eigen::ArrayXd& u = hypothesis == 0 ? *u0 : *u1;
    return linear * t - 0.5 * (1.0 - t * u).log().mean();
  }
};

}  // namespace detail

// The two limiting normalized cumulant generating functions of a detector's
// test statistic, Lambda_0(t) under H0 and Lambda_1(t) under H1, with the
// upper boundaries of their open domains of finiteness. Lambda_j(0) = 0; each
// Lambda_j is convex and finite on (-inf, t_j_sup) and evaluates to +inf at or
// beyond the boundary. Evaluation is pure and thread-safe.
class CgfPair {
 public:
  double lambda0(double t) const { return kernel().lambda(0, t); }
  double lambda1(double t) const { return kernel().lambda(1, t); }
  double lambda(int hypothesis, double t) const { return kernel().lambda(hypothesis, t); }
  double t0_sup() const { return t0_sup_; }
  double t1_sup() const { return t1_sup_; }
  double t_sup(int hypothesis) const { return hypothesis == 0 ? t0_sup_ : t1_sup_; }

  detail::CgfKernel kernel() const { return {linear_, &u0_, &u1_, t0_sup_, t1_sup_}; }

 private:
  friend CgfPair cgf_simple_quadratic(const NoiseModel&, const Spectrum&, const Quadrature&);
  friend CgfPair cgf_optimal(const NoiseModel&, const Spectrum&, const Quadrature&);
  friend CgfPair cgf_banded(const NoiseModel&, const Spectrum&, std::span<const double>,
                            const Quadrature&);
  CgfPair() = default;

  double linear_ = 0.0;
  Eigen::ArrayXd u0_, u1_;
  double t0_sup_ = 0.0, t1_sup_ = 0.0;
};

// Simple quadratic detector (energy detector derived under an assumed-white
// signal). Requires theta2 > 0. Domain sups follow in closed form from the
// spectrum bounds.
CgfPair cgf_simple_quadratic(const NoiseModel& noise, const Spectrum& spectrum,
                             const Quadrature& quad);

// Zero-threshold log-likelihood-ratio detector (whitening form). Requires
// theta2 > 0.
CgfPair cgf_optimal(const NoiseModel& noise, const Spectrum& spectrum, const Quadrature& quad);

// Banded quadratic detector with kernel symbol g_m. Requires g_m(w) > 0 on
// the evaluation grid (positive-definiteness surrogate); the domain sups use
// a denser scan that includes the grid endpoints, so every quadrature node
// stays strictly inside the log's domain for t below the sup.
CgfPair cgf_banded(const NoiseModel& noise, const Spectrum& spectrum, std::span<const double> b,
                   const Quadrature& quad);

CgfPair cgf_for(const DetectorModel& detector, const Quadrature& quad);

inline CgfPair cgf_simple_quadratic(const NoiseModel& noise, const Spectrum& spectrum) {
  return cgf_simple_quadratic(noise, spectrum, default_quadrature());
}
inline CgfPair cgf_optimal(const NoiseModel& noise, const Spectrum& spectrum) {
  return cgf_optimal(noise, spectrum, default_quadrature());
}
inline CgfPair cgf_banded(const NoiseModel& noise, const Spectrum& spectrum,
                          std::span<const double> b) {
  return cgf_banded(noise, spectrum, b, default_quadrature());
}
inline CgfPair cgf_for(const DetectorModel& detector) {
  return cgf_for(detector, default_quadrature());
}

// Exact finite-n counterpart (1/n) log E_j[exp(n t T_n)] of the limiting
// Lambda_j, computed from the n eigenvalues of the product of the detector's
// quadratic-form matrix with Sigma_{j,n}, plus the statistic's deterministic
// log-determinant offset. Serves as the convergence oracle for the cgf_*
// builders. Dense symmetric eigensolves throughout; n above the cap (8192)
// raises std::length_error; t beyond the finite-n domain returns +inf.
double finite_cgf(const DetectorModel& detector, int n, double t, int hypothesis);

}  // namespace detex
