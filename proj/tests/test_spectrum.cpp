// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "detex/errors.hpp"
#include "detex/spectrum.hpp"

using detex::kTwoPi;
using detex::NoiseModel;
using detex::Quadrature;
using detex::Spectrum;

namespace {

double quad_mean(const Spectrum& sp, const Quadrature& q) { return sp.sample(q).mean(); }

}  // namespace

TEST_CASE("eval closed forms") {
  CHECK(Spectrum::gauss_markov(0.0).eval(1.234) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(Spectrum::gauss_markov(0.5).eval(0.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(Spectrum::triangular(1).eval(2.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(Spectrum::triangular(4).eval(0.0) == doctest::Approx(4.0).epsilon(1e-14));
  // Fejer kernel M=2 is 1 + cos(w)
  CHECK(Spectrum::triangular(2).eval(1.0) == doctest::Approx(1.0 + std::cos(1.0)).epsilon(1e-12));
}

TEST_CASE("eval domain errors") {
  const Spectrum sp = Spectrum::gauss_markov(0.3);
  CHECK_THROWS_AS(sp.eval(-0.1), std::domain_error);
  CHECK_THROWS_AS(sp.eval(kTwoPi), std::domain_error);
  CHECK_THROWS_AS(Spectrum::gauss_markov(1.0), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum::gauss_markov(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum::triangular(0), std::invalid_argument);
}

TEST_CASE("bounds") {
  auto b = Spectrum::white().bounds();
  CHECK(b.inf == 1.0);
  CHECK(b.sup == 1.0);
  b = Spectrum::gauss_markov(0.5).bounds();
  CHECK(b.inf == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(b.sup == doctest::Approx(3.0).epsilon(1e-15));
  b = Spectrum::triangular(2).bounds();
  CHECK(b.inf == 0.0);
  CHECK(b.sup == 2.0);
}

TEST_CASE("eval stays within bounds on a dense grid") {
  for (const Spectrum& sp : {Spectrum::white(), Spectrum::gauss_markov(0.5),
                             Spectrum::gauss_markov(0.9), Spectrum::triangular(4)}) {
    const auto [inf, sup] = sp.bounds();
    for (int i = 0; i < 10000; ++i) {
      const double w = kTwoPi * i / 10000.0;
      const double v = sp.eval(w);
      CHECK(v >= inf - 1e-12);
      CHECK(v <= sup + 1e-12);
    }
  }
}

TEST_CASE("symmetry f(w) = f(2pi - w)") {
  for (const Spectrum& sp :
       {Spectrum::gauss_markov(0.7), Spectrum::triangular(3), Spectrum::triangular(6)}) {
    for (double w : {0.3, 1.1, 2.9}) {
      CHECK(sp.eval(w) == doctest::Approx(sp.eval(kTwoPi - w)).epsilon(1e-13));
    }
  }
}

TEST_CASE("unit average power") {
  const Quadrature q;
  for (const Spectrum& sp : {Spectrum::white(), Spectrum::gauss_markov(0.3),
                             Spectrum::gauss_markov(0.9), Spectrum::triangular(2),
                             Spectrum::triangular(7)}) {
    CHECK(std::abs(quad_mean(sp, q) - 1.0) < 1e-9);
  }
}

TEST_CASE("log_mean") {
  const Quadrature q;
  CHECK(Spectrum::white().log_mean(q) == 0.0);
  // Szego/Jensen: (1/2pi) int log|1 - a e^{jw}|^2 dw = 0, so the Poisson
  // kernel's log mean is log(1 - a^2); mpmath 30-digit check agrees.
  CHECK(std::abs(Spectrum::gauss_markov(0.5).log_mean(q) - std::log(0.75)) < 1e-9);
  for (double a : {0.0, 0.3, 0.6, 0.9}) {
    CHECK(std::abs(Spectrum::gauss_markov(a).log_mean(q) - std::log1p(-a * a)) < 1e-6);
  }
  // Spectral factorization of the M=2 Fejer kernel: L(z) = (1+z)/sqrt(2),
  // so the log mean is -log 2. The integrable log zero at pi costs the
  // midpoint rule ~(2 log2)/panels in accuracy.
  CHECK(std::abs(Spectrum::triangular(2).log_mean(q) + std::log(2.0)) < 1e-3);
}

TEST_CASE("log_mean rejects non-integrable spectra with a numerical error") {
  // A run of zero samples makes log f_s = -inf on an interval; the
  // quadrature cannot converge and must say so instead of returning -inf.
  std::vector<double> samples(256, 1.3);
  for (int i = 100; i < 120; ++i) samples[i] = 0.0;
  const Spectrum sp = Spectrum::tabulated(samples).spectrum;
  CHECK_THROWS_AS(sp.log_mean(), detex::NumericalError);
}

TEST_CASE("quadrature validates the panel count") {
  CHECK_THROWS_AS(Quadrature(1), std::invalid_argument);
  CHECK(Quadrature(64).panels() == 64);
  CHECK(Quadrature().panels() == 16384);
}

TEST_CASE("autocorrelation closed forms") {
  CHECK(Spectrum::gauss_markov(0.5).autocorrelation(2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(Spectrum::gauss_markov(0.5).autocorrelation(-2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(Spectrum::triangular(4).autocorrelation(1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(Spectrum::triangular(4).autocorrelation(5) == 0.0);
  CHECK(Spectrum::white().autocorrelation(0) == 1.0);
  CHECK(Spectrum::white().autocorrelation(3) == 0.0);
}

TEST_CASE("autocorrelation matches quadrature of f_s cos(kw)") {
  const Quadrature q;
  for (const Spectrum& sp :
       {Spectrum::gauss_markov(0.6), Spectrum::triangular(4), Spectrum::white()}) {
    const Eigen::ArrayXd f = sp.sample(q);
    for (long k = 0; k <= 10; ++k) {
      const double r = (f * (static_cast<double>(k) * q.nodes()).cos()).mean();
      CHECK(std::abs(r - sp.autocorrelation(k)) < 1e-8);
    }
  }
}

TEST_CASE("tabulated spectra") {
  const Quadrature q;
  const Spectrum base = Spectrum::gauss_markov(0.5);
  const int k = 2048;
  std::vector<double> samples(k);
  for (int i = 0; i < k; ++i) samples[i] = base.eval(kTwoPi * i / k);

  SUBCASE("eval interpolates and moments match the source spectrum") {
    const auto loaded = Spectrum::tabulated(samples);
    CHECK(!loaded.renormalization_warning);
    CHECK(loaded.scale == doctest::Approx(1.0).epsilon(1e-6));
    const Spectrum& sp = loaded.spectrum;
    for (double w : {0.0, 0.7, 3.14, 5.5})
      CHECK(sp.eval(w) == doctest::Approx(base.eval(w)).epsilon(1e-5));
    CHECK(std::abs(quad_mean(sp, q) - 1.0) < 1e-6);
    for (long lag : {0L, 1L, 3L})
      CHECK(std::abs(sp.autocorrelation(lag) - base.autocorrelation(lag)) < 1e-5);
    CHECK(sp.bounds().inf == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
    CHECK(sp.bounds().sup == doctest::Approx(3.0).epsilon(1e-4));
  }

  SUBCASE("renormalization warning above 1%") {
    std::vector<double> scaled = samples;
    for (double& v : scaled) v *= 1.05;
    const auto loaded = Spectrum::tabulated(scaled);
    CHECK(loaded.renormalization_warning);
    CHECK(loaded.scale == doctest::Approx(1.0 / 1.05).epsilon(1e-6));
    CHECK(std::abs(quad_mean(loaded.spectrum, q) - 1.0) < 1e-6);
  }

  SUBCASE("file round trip") {
    const char* path = "tabulated_test_spectrum.txt";
    {
      std::ofstream out(path);
      out << "# omega value\n";
      for (int i = 0; i < k; ++i) {
        char line[64];
        std::snprintf(line, sizeof line, "%.17g %.17g\n", kTwoPi * i / k, samples[i]);
        out << line;
      }
    }
    const auto loaded = Spectrum::load_tabulated(path);
    CHECK(loaded.spectrum.eval(0.7) == doctest::Approx(base.eval(0.7)).epsilon(1e-5));
    std::remove(path);
  }

  SUBCASE("bad files are rejected") {
    const char* path = "tabulated_bad_spectrum.txt";
    {
      std::ofstream out(path);
      out << "0.0 1.0\n0.5 not_a_number\n";
    }
    CHECK_THROWS_AS(Spectrum::load_tabulated(path), std::invalid_argument);
    {
      std::ofstream out(path);
      out << "0.0 1.0\n2.0 1.0\n1.0 1.0\n";  // not increasing
    }
    CHECK_THROWS_AS(Spectrum::load_tabulated(path), std::invalid_argument);
    std::remove(path);
    CHECK_THROWS_AS(Spectrum::load_tabulated("does_not_exist.txt"), std::invalid_argument);
  }
}

TEST_CASE("noise model") {
  CHECK_THROWS_AS(NoiseModel(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseModel(1.0, -1.0), std::invalid_argument);
  const NoiseModel n = NoiseModel::from_snr_db(10.0);
  CHECK(n.sigma2 == 1.0);
  CHECK(n.theta2 == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(NoiseModel(2.0, 4.0).snr() == doctest::Approx(2.0).epsilon(1e-15));
}
