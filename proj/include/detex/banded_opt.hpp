// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "detex/exponent.hpp"

namespace detex::banded {

// Limits of the banded statistic under the two hypotheses,
//   Tbar_j = (1/4pi) int log(sigma2/(sigma2+theta2 f_s)) dw
//          + (1/4pi) int (sigma2 + j*theta2 f_s(w)) g_m(w) dw,
// which coincide with Lambda_j'(0) of the banded CGF.
struct Limits {
  double tbar0 = 0.0;
  double tbar1 = 0.0;
};

Limits limits(const NoiseModel& noise, const Spectrum& spectrum, std::span<const double> b,
              const Quadrature& quad);

// Necessary condition for a positive exponent: the limits straddle the zero
// threshold, Tbar_0 < 0 < Tbar_1. Otherwise the error probability decays
// subexponentially and the exponent is declared 0.
bool feasible(const NoiseModel& noise, const Spectrum& spectrum, std::span<const double> b,
              const Quadrature& quad);

// Exponent report for one coefficient vector; requires feasible(b) (throws
// std::invalid_argument otherwise).
ExponentReport cell_exponent(const NoiseModel& noise, const Spectrum& spectrum,
                             std::span<const double> b, const Quadrature& quad);

struct CoefficientRange {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;  // >= 3
};

struct SearchConfig {
  int m = 1;
  std::vector<CoefficientRange> ranges;  // one per coefficient b0..bm
  int refinement_rounds = 2;
  NoiseModel noise;
  Spectrum spectrum;

  // Spec'd default grid: b0 in [0.01, 2.0] x 64 steps, b_l in [-1, 1] x 64
  // steps for l >= 1, two refinement rounds.
  static SearchConfig with_defaults(int m, NoiseModel noise, Spectrum spectrum);
  void validate() const;
};

struct SearchResult {
  bool found = false;  // false when no feasible cell exists in the grid
  std::vector<double> b_star;
  ExponentReport report;
  std::int64_t cells_evaluated = 0;  // grid cells enumerated (all rounds)
  std::int64_t cells_feasible = 0;   // cells whose exponent was computed
};

// Exhaustive search over the coefficient grid, skipping cells whose symbol
// is not strictly positive and infeasible cells, keeping the argmax of
// min(E0, E1); then `refinement_rounds` local shrink-by-half passes around
// the incumbent (clipped to the original bounds, same step counts). Ties
// within 1e-12 of the best exponent resolve to the lexicographically
// smallest coefficient vector; the scan order is fixed, so the result is
// deterministic.
SearchResult grid_search(const SearchConfig& config, const Quadrature& quad);
inline SearchResult grid_search(const SearchConfig& config) {
  return grid_search(config, default_quadrature());
}

// CSV row `m,b0,...,bm,E0,E1,E,cells_evaluated,cells_feasible`.
std::string result_csv_row(int m, const SearchResult& result);

}  // namespace detex::banded
