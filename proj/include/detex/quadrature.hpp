// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

namespace detex {

inline constexpr double kTwoPi = 6.28318530717958647692528676656;

// All spectral integrals in this library are averages (1/2pi) * int_0^2pi
// of 2pi-periodic integrands, evaluated by the composite midpoint rule on a
// uniform grid. For periodic integrands this rule is spectrally accurate,
// and the half-panel offset keeps the nodes away from omega = 2*pi*k/M, so
// integrable log singularities of Fejer-type spectra never hit a node
// (exact for any correlation length M below the panel count when the panel
// count is a power of two).
class Quadrature {
 public:
  static constexpr int kDefaultPanels = 1 << 14;

  explicit Quadrature(int panels = kDefaultPanels) {
    if (panels < 2) throw std::invalid_argument("Quadrature: panels must be >= 2");
    nodes_ = (Eigen::ArrayXd::LinSpaced(panels, 0, panels - 1) + 0.5) * (kTwoPi / panels);
  }

  int panels() const { return static_cast<int>(nodes_.size()); }
  const Eigen::ArrayXd& nodes() const { return nodes_; }

  // (1/2pi) * int_0^2pi of the integrand sampled on nodes().
  double mean(const Eigen::ArrayXd& sampled) const { return sampled.mean(); }

  template <class F>
  double mean_of(F&& f) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < nodes_.size(); ++i) acc += f(nodes_[i]);
    return acc / static_cast<double>(nodes_.size());
  }

 private:
  Eigen::ArrayXd nodes_;
};

// Shared default-resolution grid (2^14 panels); every module integrates on
// the same grid unless the caller passes its own, so results are reproducible
// across modules.
const Quadrature& default_quadrature();

}  // namespace detex
