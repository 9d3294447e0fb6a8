// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "detex/quadrature.hpp"

namespace detex {

enum class SpectrumKind { kWhite, kGaussMarkov, kTriangular, kTabulated };

struct SpectrumBounds {
  double inf;  // essential infimum m of f_s over [0, 2pi)
  double sup;  // essential supremum M
};

// Power spectral density f_s(omega) of a zero-mean unit-variance stationary
// signal, omega in [0, 2pi). Immutable after construction; all member
// functions are pure and safe to call concurrently.
//
// Built-in kinds:
//   white         f_s = 1
//   gauss_markov  Poisson kernel (1-a^2)/(1-2a cos w + a^2), 0 <= a < 1
//   triangular    Fejer kernel (1/M)(sin(Mw/2)/sin(w/2))^2, integer M >= 1
//   tabulated     linear interpolation of samples on a uniform omega grid,
//                 renormalized to unit average power on construction
class Spectrum {
 public:
  Spectrum() = default;  // white
  static Spectrum white();
  static Spectrum gauss_markov(double a);
  static Spectrum triangular(int correlation_length);
  // Samples on the uniform grid omega_k = 2*pi*k/K, k = 0..K-1. Renormalizes
  // to unit mean power; |1 - scale| > 1% sets the warning flag on the result.
  struct Tabulated;
  static Tabulated tabulated(std::vector<double> samples);
  // Two-column text file: "omega value" per line, omega strictly increasing
  // over a uniform grid starting at 0 inside [0, 2pi). '#' starts a comment.
  static Tabulated load_tabulated(const std::string& path);

  SpectrumKind kind() const { return kind_; }
  double gauss_markov_a() const { return a_; }
  int triangular_m() const { return m_; }

  // f_s(omega); throws std::domain_error for omega outside [0, 2pi).
  double eval(double omega) const;

  // Essential bounds (closed form for the analytic kinds, sample min/max for
  // tabulated).
  SpectrumBounds bounds() const { return bounds_; }

  // Szego geometric-mean exponent (1/2pi) int log f_s. Integrable log
  // singularities (Fejer zeros) are handled by the midpoint grid; throws
  // NumericalError with a residual estimate if the quadrature disagrees with
  // its half-resolution check or goes non-finite.
  double log_mean(const Quadrature& quad) const;
  double log_mean() const { return log_mean(default_quadrature()); }

  // E{s_0 s_k}: a^|k| (Gauss-Markov), max(0, 1-|k|/M) (triangular),
  // indicator(k=0) (white), inverse transform of the samples (tabulated).
  double autocorrelation(long lag) const;

  // f_s at every quadrature node.
  Eigen::ArrayXd sample(const Quadrature& quad) const;

 private:
  SpectrumKind kind_ = SpectrumKind::kWhite;
  double a_ = 0.0;
  int m_ = 1;
  std::vector<double> samples_;
  SpectrumBounds bounds_{1.0, 1.0};
};

struct Spectrum::Tabulated {
  Spectrum spectrum;
  double scale = 1.0;  // applied renormalization factor
  bool renormalization_warning = false;
};

// Observation model: y_i = w_i + theta * s_i with w_i ~ N(0, sigma2) i.i.d.
// noise, so SNR = theta2 / sigma2.
struct NoiseModel {
  double sigma2 = 1.0;  // noise variance, > 0
  double theta2 = 0.0;  // squared signal amplitude, >= 0

  NoiseModel() = default;
  NoiseModel(double sigma2_in, double theta2_in);
  double snr() const { return theta2 / sigma2; }

  static NoiseModel from_snr_db(double snr_db, double sigma2 = 1.0);
};

}  // namespace detex
