// SPDX-License-Identifier: Apache-2.0
#include "detex/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "detex/errors.hpp"

namespace detex {

const Quadrature& default_quadrature() {
  static const Quadrature quad(Quadrature::kDefaultPanels);
  return quad;
}

Spectrum Spectrum::white() {
  Spectrum s;
  s.kind_ = SpectrumKind::kWhite;
  s.bounds_ = {1.0, 1.0};
  return s;
}

Spectrum Spectrum::gauss_markov(double a) {
  if (!(a >= 0.0 && a < 1.0))
    throw std::invalid_argument("gauss_markov: correlation a must satisfy 0 <= a < 1");
  Spectrum s;
  s.kind_ = SpectrumKind::kGaussMarkov;
  s.a_ = a;
  s.bounds_ = {(1.0 - a) / (1.0 + a), (1.0 + a) / (1.0 - a)};
  return s;
}

Spectrum Spectrum::triangular(int correlation_length) {
  if (correlation_length < 1)
    throw std::invalid_argument("triangular: correlation length M must be a positive integer");
  Spectrum s;
  s.kind_ = SpectrumKind::kTriangular;
  s.m_ = correlation_length;
  // The Fejer kernel peaks at M (omega=0) and vanishes at omega = 2*pi*k/M
  // for M >= 2; M = 1 degenerates to the white spectrum.
  s.bounds_ = {correlation_length == 1 ? 1.0 : 0.0, static_cast<double>(correlation_length)};
  return s;
}

Spectrum::Tabulated Spectrum::tabulated(std::vector<double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("tabulated: need at least 2 samples");
  for (double v : samples)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("tabulated: samples must be finite and nonnegative");

  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  if (!(mean > 0.0)) throw std::invalid_argument("tabulated: samples must not be all zero");

  Tabulated out{Spectrum{}, 1.0 / mean, std::abs(1.0 - 1.0 / mean) > 0.01};
  for (double& v : samples) v *= out.scale;

  Spectrum& s = out.spectrum;
  s.kind_ = SpectrumKind::kTabulated;
  s.samples_ = std::move(samples);
  auto [lo, hi] = std::minmax_element(s.samples_.begin(), s.samples_.end());
  s.bounds_ = {*lo, *hi};
  return out;
}

Spectrum::Tabulated Spectrum::load_tabulated(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_tabulated: cannot open '" + path + "'");

  std::vector<double> omegas, values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double w, v;
    if (!(ls >> w)) continue;  // blank/comment line
    if (!(ls >> v))
      throw std::invalid_argument("load_tabulated: line " + std::to_string(lineno) +
                                  ": expected 'omega value'");
    omegas.push_back(w);
    values.push_back(v);
  }
  if (omegas.size() < 2) throw std::invalid_argument("load_tabulated: need at least 2 rows");
  if (std::abs(omegas.front()) > 1e-12)
    throw std::invalid_argument("load_tabulated: grid must start at omega = 0");

  const double step = kTwoPi / static_cast<double>(omegas.size());
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    if (omegas[k] < 0.0 || omegas[k] >= kTwoPi)
      throw std::invalid_argument("load_tabulated: omega out of [0, 2pi) at row " +
                                  std::to_string(k + 1));
    if (k > 0 && !(omegas[k] > omegas[k - 1]))
      throw std::invalid_argument("load_tabulated: omega must be strictly increasing (row " +
                                  std::to_string(k + 1) + ")");
    if (std::abs(omegas[k] - step * static_cast<double>(k)) > 1e-6 * kTwoPi)
      throw std::invalid_argument("load_tabulated: omega grid is not uniform at row " +
                                  std::to_string(k + 1));
  }
  return tabulated(std::move(values));
}

double Spectrum::eval(double omega) const {
  if (!(omega >= 0.0 && omega < kTwoPi))
    throw std::domain_error("Spectrum::eval: omega must lie in [0, 2pi)");
  switch (kind_) {
    case SpectrumKind::kWhite:
      return 1.0;
    case SpectrumKind::kGaussMarkov:
      return (1.0 - a_ * a_) / (1.0 - 2.0 * a_ * std::cos(omega) + a_ * a_);
    case SpectrumKind::kTriangular: {
      if (m_ == 1) return 1.0;
      const double half = 0.5 * omega;
      const double den = std::sin(half);
      // Removable singularity at omega = 0: the sin ratio tends to M.
      if (std::abs(den) < 1e-12) return static_cast<double>(m_);
      const double ratio = std::sin(static_cast<double>(m_) * half) / den;
      return ratio * ratio / static_cast<double>(m_);
    }
    case SpectrumKind::kTabulated: {
      const auto k = static_cast<double>(samples_.size());
      const double x = omega * k / kTwoPi;
      const auto i0 = static_cast<std::size_t>(x);
      const double frac = x - static_cast<double>(i0);
      const std::size_t i1 = (i0 + 1) % samples_.size();
      return samples_[i0] * (1.0 - frac) + samples_[i1] * frac;
    }
  }
  return 0.0;  // unreachable
}

double Spectrum::log_mean(const Quadrature& quad) const {
  if (kind_ == SpectrumKind::kWhite) return 0.0;

  auto evaluate = [this](const Quadrature& q) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < q.nodes().size(); ++i) acc += std::log(eval(q.nodes()[i]));
    return acc / static_cast<double>(q.panels());
  };
  const double full = evaluate(quad);
  const double half = evaluate(Quadrature(quad.panels() / 2));
  const double residual = std::abs(full - half);
  if (!std::isfinite(full) || residual > std::max(1e-3, 0.02 * std::abs(full)))
    throw NumericalError("log_mean: quadrature did not converge (value " + std::to_string(full) +
                         ", half-resolution residual " + std::to_string(residual) + ")");
  return full;
}

double Spectrum::autocorrelation(long lag) const {
  const long k = std::labs(lag);
  switch (kind_) {
    case SpectrumKind::kWhite:
      return k == 0 ? 1.0 : 0.0;
    case SpectrumKind::kGaussMarkov:
      return std::pow(a_, static_cast<double>(k));
    case SpectrumKind::kTriangular:
      return std::max(0.0, 1.0 - static_cast<double>(k) / static_cast<double>(m_));
    case SpectrumKind::kTabulated: {
      // Inverse transform of the stored samples.
      const auto n = static_cast<double>(samples_.size());
      double acc = 0.0;
      for (std::size_t j = 0; j < samples_.size(); ++j)
        acc += samples_[j] * std::cos(static_cast<double>(k) * kTwoPi * static_cast<double>(j) / n);
      return acc / n;
    }
  }
  return 0.0;  // unreachable
}

Eigen::ArrayXd Spectrum::sample(const Quadrature& quad) const {
  const Eigen::ArrayXd& w = quad.nodes();
  Eigen::ArrayXd out(w.size());
  switch (kind_) {
    case SpectrumKind::kWhite:
      out.setOnes();
      break;
    case SpectrumKind::kGaussMarkov:
      out = (1.0 - a_ * a_) / (1.0 + a_ * a_ - 2.0 * a_ * w.cos());
      break;
    default:
      for (Eigen::Index i = 0; i < w.size(); ++i) out[i] = eval(w[i]);
      break;
  }
  return out;
}

NoiseModel::NoiseModel(double sigma2_in, double theta2_in) : sigma2(sigma2_in), theta2(theta2_in) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("NoiseModel: sigma2 must be positive");
  if (!(theta2 >= 0.0) || !std::isfinite(theta2))
    throw std::invalid_argument("NoiseModel: theta2 must be nonnegative");
}

NoiseModel NoiseModel::from_snr_db(double snr_db, double sigma2) {
  return NoiseModel(sigma2, sigma2 * std::pow(10.0, snr_db / 10.0));
}

}  // namespace detex
