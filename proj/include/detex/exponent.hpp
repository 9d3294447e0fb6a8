// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "detex/cgf.hpp"
#include "detex/detector.hpp"

namespace detex {

// Error exponents E0 (false alarm), E1 (miss) and E = min(E0, E1) of a
// detector at threshold 0, with the maximizing tilts t_j* and the statistic's
// limiting means under the two hypotheses. A detector is feasible iff
// mean0 < 0 < mean1 (the limits straddle the threshold); otherwise the
// exponent on the failing side is 0 and e = 0.
struct ExponentReport {
  double e0 = 0.0, e1 = 0.0, e = 0.0;
  double t0_star = 0.0, t1_star = 0.0;
  bool feasible = false;
  double mean0 = 0.0, mean1 = 0.0;  // Lambda_j'(0)
};

// Legendre-Fenchel transform I_j(z) = sup_t [z t - Lambda_j(t)] over the open
// domain of Lambda_j, by concave 1-D maximization. Returns 0 at z =
// Lambda_j'(0) and +inf when the supremum diverges (z outside the closure of
// the derivative range).
double rate(const CgfPair& cgf, int hypothesis, double z);

ExponentReport exponents(const DetectorModel& detector, const Quadrature& quad);
inline ExponentReport exponents(const DetectorModel& detector) {
  return exponents(detector, default_quadrature());
}

// Asymptotic relative efficiency E(d1)/E(d2); throws std::domain_error when
// the reference exponent is zero.
double are(const DetectorModel& d1, const DetectorModel& d2, const Quadrature& quad);
inline double are(const DetectorModel& d1, const DetectorModel& d2) {
  return are(d1, d2, default_quadrature());
}

struct AreSweepRow {
  double param = 0.0;
  double snr_db = 0.0;
  double e1 = 0.0, e2 = 0.0, are = 0.0;
  bool feasible1 = false, feasible2 = false;
  bool ok = true;        // false when this cell failed; note holds the reason
  std::string note;
};

// One row per (param, snr) cell, param-major, each cell evaluated
// independently; per-cell failures are recorded in the row and the sweep
// continues.
std::vector<AreSweepRow> are_sweep(DetectorFamily family1, DetectorFamily family2,
                                   const std::function<Spectrum(double)>& make_spectrum,
                                   const std::vector<double>& params,
                                   const std::vector<double>& snrs_db, double sigma2,
                                   const Quadrature& quad);

// Header `param,snr_db,E_detector1,E_detector2,ARE,feasible1,feasible2`.
std::string are_sweep_csv(const std::vector<AreSweepRow>& rows);

namespace detail {

// Lambda_j'(t) by central difference, step 1e-6*(1+|t|), capped away from the
// domain boundary.
double cgf_slope(const CgfKernel& kernel, int hypothesis, double t);

// Shared exponent core for CgfPair and the grid-search fast path.
ExponentReport exponents_of_kernel(const CgfKernel& kernel);

struct MaximizeOutcome {
  double t = 0.0;
  double value = 0.0;
  int evals = 0;
  bool converged = false;
};

// Golden-section bracketing refined by safeguarded Newton on the
// finite-difference derivative; phi must be concave on [lo, hi] (+-inf
// values tolerated at the edges).
MaximizeOutcome maximize_concave(const std::function<double(double)>& phi, double lo, double hi);

}  // namespace detail

inline ExponentReport exponents_of_cgf(const CgfPair& cgf) {
  return detail::exponents_of_kernel(cgf.kernel());
}

}  // namespace detex
