// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <span>
#include <utility>
#include <vector>

#include "detex/spectrum.hpp"

namespace detex {

enum class DetectorFamily { kOptimal, kSimpleQuadratic, kBanded };

// Symbol of the banded Toeplitz kernel: g_m(w) = b0 + 2 sum_{l=1..m} b_l cos(l w),
// where b holds (b0, ..., bm).
double banded_symbol(std::span<const double> b, double omega);
Eigen::ArrayXd banded_symbol(std::span<const double> b, const Eigen::ArrayXd& omega);

// One detector under test: family, observation model, and signal spectrum.
// Banded detectors additionally carry the kernel coefficients b0..bm.
struct DetectorModel {
  DetectorFamily family = DetectorFamily::kSimpleQuadratic;
  NoiseModel noise;
  Spectrum spectrum;
  std::vector<double> banded_b;  // empty unless family == kBanded

  static DetectorModel optimal(NoiseModel noise, Spectrum spectrum) {
    return {DetectorFamily::kOptimal, noise, std::move(spectrum), {}};
  }
  static DetectorModel simple_quadratic(NoiseModel noise, Spectrum spectrum) {
    return {DetectorFamily::kSimpleQuadratic, noise, std::move(spectrum), {}};
  }
  static DetectorModel banded(NoiseModel noise, Spectrum spectrum, std::vector<double> b) {
    if (b.empty()) throw std::invalid_argument("banded detector needs coefficients b0..bm");
    return {DetectorFamily::kBanded, noise, std::move(spectrum), std::move(b)};
  }

  // Half bandwidth m (kernel bandwidth is 2m+1).
  int bandwidth() const { return static_cast<int>(banded_b.size()) - 1; }
};

const char* family_name(DetectorFamily family);

}  // namespace detex
