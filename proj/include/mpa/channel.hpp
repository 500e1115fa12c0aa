// SPDX-License-Identifier: Apache-2.0
//
// Predictor-antenna spatial-mismatch channel model: geometry -> effective
// distance -> Jakes correlation -> mismatch coefficient sigma, estimation
// error folding, and the conditional law of the receive-antenna gain given
// the predictor observation.
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "mpa/rng.hpp"
#include "mpa/special.hpp"

namespace mpa::channel {

inline constexpr double speed_of_light = 299792458.0;  // m/s

// Below this effective sigma the conditional law is treated as a point mass;
// the Marcum arguments blow up as sigma -> 0.
inline constexpr double sigma_min = 1e-6;

inline double effective_distance(double d_a, double v, double delta) {
  mpa::detail::require(d_a >= 0.0 && v >= 0.0 && delta >= 0.0,
                       "effective_distance: inputs must be >= 0");
  return std::fabs(d_a - v * delta);
}

struct Corr2 {
  double m[2][2];
};

inline Corr2 jakes_correlation(double d, double lambda) {
  mpa::detail::require(d >= 0.0 && lambda > 0.0, "jakes_correlation: bad inputs");
  double off = mpa::bessel_j0(2.0 * M_PI * d / lambda);
  return {{{1.0, off}, {off, 1.0}}};
}

// Mismatch coefficient from the principal symmetric square root of the 2x2
// Jakes matrix: phi1 = root diagonal, phi2 = root off-diagonal, and
// sigma = |(phi2^2 - phi1^2)/phi1| / sqrt((phi2/phi1)^2 + ((phi2^2-phi1^2)/phi1)^2).
// The magnitude is returned; only sigma^2 and 1 - sigma^2 enter the model.
inline double sigma_from_distance(double d, double lambda) {
  mpa::detail::require(d >= 0.0 && lambda > 0.0, "sigma_from_distance: bad inputs");
  double c = mpa::bessel_j0(2.0 * M_PI * d / lambda);
  if (c >= 1.0) return 0.0;
  if (c <= -1.0) return 0.0;
  double phi1 = 0.5 * (std::sqrt(1.0 + c) + std::sqrt(1.0 - c));
  double phi2 = 0.5 * (std::sqrt(1.0 + c) - std::sqrt(1.0 - c));
  double s = (phi2 * phi2 - phi1 * phi1) / phi1;
  double r = phi2 / phi1;
  double denom = std::sqrt(r * r + s * s);
  if (denom == 0.0) return 0.0;
  return std::min(1.0, std::fabs(s) / denom);
}

// Fold the estimation-error correlation kappa into the mismatch model:
// h = kappa sqrt(1-sigma^2) hhat + w,  w ~ CN(0, (kappa sigma)^2 + 1 - kappa^2).
// Returns {sigma_eff, noncentrality_coeff}.
inline std::pair<double, double> fold_estimation_error(double sigma, double kappa) {
  mpa::detail::require(sigma >= 0.0 && sigma <= 1.0 && kappa >= 0.0 && kappa <= 1.0,
                       "fold_estimation_error: sigma, kappa must lie in [0,1]");
  double nc = kappa * kappa * (1.0 - sigma * sigma);
  double s2 = kappa * kappa * sigma * sigma + 1.0 - kappa * kappa;
  return {std::sqrt(s2), nc};
}

struct MismatchModel {
  double d_a = 0.0;     // antenna separation [m]
  double v = 0.0;       // vehicle speed [m/s]
  double delta = 0.0;   // processing delay [s]
  double f_c = 0.0;     // carrier frequency [Hz]
  double kappa = 1.0;   // estimation-error correlation
  double lambda = 0.0;  // derived wavelength [m]
  double d = 0.0;       // derived effective distance [m]
  double sigma = 0.0;   // derived mismatch coefficient
};

inline MismatchModel make_model(double d_a, double v, double delta, double f_c,
                                double kappa = 1.0) {
  mpa::detail::require(f_c > 0.0, "make_model: f_c must be > 0");
  mpa::detail::require(kappa >= 0.0 && kappa <= 1.0, "make_model: kappa in [0,1]");
  MismatchModel m;
  m.d_a = d_a;
  m.v = v;
  m.delta = delta;
  m.f_c = f_c;
  m.kappa = kappa;
  m.lambda = speed_of_light / f_c;
  m.d = effective_distance(d_a, v, delta);
  m.sigma = sigma_from_distance(m.d, m.lambda);
  return m;
}

// Conditional law of g = |h|^2 given ghat: noncentral chi-squared with two
// degrees of freedom, noncentrality nc*ghat and per-dimension variance s^2/2.
struct ConditionalGainDist {
  double g_hat = 0.0;
  double sigma_eff = 1.0;
  double noncentrality_coeff = 0.0;

  static ConditionalGainDist make(double g_hat, double sigma, double kappa = 1.0) {
    mpa::detail::require(g_hat >= 0.0, "ConditionalGainDist: g_hat must be >= 0");
    auto [s_eff, nc] = fold_estimation_error(sigma, kappa);
    return {g_hat, s_eff, nc};
  }

  bool degenerate() const { return sigma_eff <= sigma_min; }
  double mean() const {
    return noncentrality_coeff * g_hat + sigma_eff * sigma_eff;
  }
  // Marcum argument sqrt(2 nc ghat / s^2).
  double alpha() const {
    return std::sqrt(2.0 * noncentrality_coeff * g_hat) / sigma_eff;
  }

  double cdf(double x) const {
    mpa::detail::require(std::isfinite(x) && x >= 0.0, "cdf: x must be >= 0");
    if (degenerate())
      return x >= noncentrality_coeff * g_hat ? 1.0 : 0.0;
    double s2 = sigma_eff * sigma_eff;
    return 1.0 - mpa::marcum_q1(alpha(), std::sqrt(2.0 * x / s2));
  }

  double pdf(double x) const {
    mpa::detail::require(std::isfinite(x), "pdf: non-finite x");
    if (x < 0.0) return 0.0;
    if (degenerate()) return 0.0;  // point mass has no density
    double s2 = sigma_eff * sigma_eff;
    double ncg = noncentrality_coeff * g_hat;
    // (1/s^2) exp(-(sqrt(x)-sqrt(nc ghat))^2 / s^2) * i0e(2 sqrt(x nc ghat)/s^2)
    double rt = std::sqrt(x * ncg);
    double z = std::sqrt(x) - std::sqrt(ncg);
    return std::exp(-z * z / s2) * mpa::bessel_i0_scaled(2.0 * rt / s2) / s2;
  }

  double quantile(double p) const {
    mpa::detail::require(p >= 0.0 && p < 1.0, "quantile: p must lie in [0,1)");
    if (p == 0.0) return 0.0;
    if (degenerate()) return noncentrality_coeff * g_hat;
    double hi = mean() + 1.0;
    while (cdf(hi) < p) hi = hi * 2.0 + 1.0;
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + hi); ++i) {
      double mid = 0.5 * (lo + hi);
      (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double sample(Rng& rng) const {
    double amp = std::sqrt(noncentrality_coeff * g_hat);
    auto z = rng.cgauss() * sigma_eff;
    double re = amp + z.real();
    double im = z.imag();
    return re * re + im * im;
  }
};

// Joint (ghat, g) pairs from the full chain
//   h = kappa sqrt(1-sigma^2) hhat + kappa sigma q + sqrt(1-kappa^2) z
// with hhat, q, z iid CN(0,1).  Deterministic for a given seed.
inline std::vector<std::pair<double, double>> sample_pair(
    const MismatchModel& model, std::size_t count, std::uint64_t seed) {
  mpa::detail::require(count >= 1, "sample_pair: count must be >= 1");
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  Rng rng = substream(seed, 0);
  const double c1 = model.kappa * std::sqrt(1.0 - model.sigma * model.sigma);
  const double c2 = model.kappa * model.sigma;
  const double c3 = std::sqrt(1.0 - model.kappa * model.kappa);
  for (std::size_t i = 0; i < count; ++i) {
    auto hhat = rng.cgauss();
    auto q = rng.cgauss();
    auto z = rng.cgauss();
    auto h = c1 * hhat + c2 * q + c3 * z;
    out.emplace_back(std::norm(hhat), std::norm(h));
  }
  return out;
}

}  // namespace mpa::channel
