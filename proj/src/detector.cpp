// SPDX-License-Identifier: Apache-2.0
#include "detex/detector.hpp"

#include <cmath>

namespace detex {

double banded_symbol(std::span<const double> b, double omega) {
  if (b.empty()) throw std::invalid_argument("banded_symbol: empty coefficient list");
  double g = b[0];
  for (std::size_t l = 1; l < b.size(); ++l)
    g += 2.0 * b[l] * std::cos(static_cast<double>(l) * omega);
  return g;
}

Eigen::ArrayXd banded_symbol(std::span<const double> b, const Eigen::ArrayXd& omega) {
  if (b.empty()) throw std::invalid_argument("banded_symbol: empty coefficient list");
  Eigen::ArrayXd g = Eigen::ArrayXd::Constant(omega.size(), b[0]);
  for (std::size_t l = 1; l < b.size(); ++l)
    g += 2.0 * b[l] * (static_cast<double>(l) * omega).cos();
  return g;
}

const char* family_name(DetectorFamily family) {
  switch (family) {
    case DetectorFamily::kOptimal:
      return "optimal";
    case DetectorFamily::kSimpleQuadratic:
      return "simple_quadratic";
    case DetectorFamily::kBanded:
      return "banded";
  }
  return "unknown";
}

}  // namespace detex
