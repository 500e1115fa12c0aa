// SPDX-License-Identifier: Apache-2.0
//
// Outage-constrained power allocation for the HARQ predictor-antenna link:
// round-1 outage over the Exp(1) gain, round-2 power laws for RTD and INR
// via the log-linear Marcum-Q inverse, expected total power, and the
// numerical round-1 power optimization with Monte Carlo verification.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mpa/channel.hpp"
#include "mpa/optimize.hpp"
#include "mpa/quadrature.hpp"
#include "mpa/rng.hpp"
#include "mpa/special.hpp"

namespace mpa::harq {

enum class Protocol { rtd, inr };

inline const char* to_string(Protocol p) {
  return p == Protocol::rtd ? "rtd" : "inr";
}

struct HarqPolicy {
  Protocol protocol = Protocol::rtd;
  double rate_R = 1.0;    // npcu
  double epsilon = 1e-2;  // target outage
  double P1 = 1.0;        // round-1 power
  double sigma = 0.3;     // mismatch coefficient

  double theta() const { return std::expm1(rate_R); }
};

inline void validate(const HarqPolicy& p) {
  mpa::detail::require(p.rate_R > 0.0 && p.P1 > 0.0, "HarqPolicy: R, P1 must be > 0");
  mpa::detail::require(p.epsilon > 0.0 && p.epsilon < 1.0, "HarqPolicy: epsilon in (0,1)");
  mpa::detail::require(p.sigma >= 0.0 && p.sigma <= 1.0, "HarqPolicy: sigma in [0,1]");
}

struct PowerResult {
  double P1 = 0.0;
  double expected_total = 0.0;
  double achieved_outage = 0.0;  // Monte Carlo, conditional on a retransmission
};

inline double round1_outage(double R, double P1) {
  mpa::detail::require(P1 > 0.0 && R >= 0.0, "round1_outage: bad inputs");
  return -std::expm1(-std::expm1(R) / P1);
}

// Quartic fits for Q1(s, rho) ~ exp(-e^{I(s)} rho^{J(s)}).
inline std::pair<double, double> q1_loglinear_coeffs(double s) {
  mpa::detail::require(std::isfinite(s) && s >= 0.0,
                       "q1_loglinear_coeffs: s must be >= 0");
  double i = -0.840 + s * (0.327 + s * (-0.740 + s * (0.083 + s * -0.004)));
  double j = 2.174 + s * (-0.592 + s * (0.593 + s * (-0.092 + s * 0.005)));
  return {i, j};
}

// The fit was made on a bounded range of s; flag excursions.
inline bool q1_loglinear_in_range(double s) { return s <= 10.0; }

// F^{-1}(eps) for the conditional gain law, through the log-linear inverse:
// (sigma^2/2) (-log(1-eps) e^{-I(s)})^{2/J(s)}, s = sqrt(2 ghat (1-sigma^2))/sigma.
inline double inverse_cdf_approx(double epsilon, double g_hat, double sigma) {
  mpa::detail::require(epsilon > 0.0 && epsilon < 1.0,
                       "inverse_cdf_approx: epsilon in (0,1)");
  mpa::detail::require(g_hat >= 0.0 && sigma >= 0.0 && sigma <= 1.0,
                       "inverse_cdf_approx: bad g_hat/sigma");
  if (sigma <= mpa::channel::sigma_min)
    return (1.0 - sigma * sigma) * g_hat;  // degenerate CSIT: point mass
  double s = std::sqrt(2.0 * g_hat * (1.0 - sigma * sigma)) / sigma;
  auto [i, j] = q1_loglinear_coeffs(s);
  double base = -std::log1p(-epsilon) * std::exp(-i);
  return 0.5 * sigma * sigma * std::pow(base, 2.0 / j);
}

// Omega(ghat) = 1 / F^{-1}(eps); the closed-form round-2 scale.
inline double omega(double epsilon, double g_hat, double sigma) {
  return 1.0 / inverse_cdf_approx(epsilon, g_hat, sigma);
}

inline double p2_rtd(double g_hat, const HarqPolicy& p) {
  validate(p);
  mpa::detail::require(g_hat >= 0.0, "p2_rtd: g_hat must be >= 0");
  double deficit = p.theta() - g_hat * p.P1;
  if (deficit <= 0.0) return 0.0;
  return deficit / inverse_cdf_approx(p.epsilon, g_hat, p.sigma);
}

inline double p2_inr(double g_hat, const HarqPolicy& p) {
  validate(p);
  mpa::detail::require(g_hat >= 0.0, "p2_inr: g_hat must be >= 0");
  double deficit = p.theta() - g_hat * p.P1;
  if (deficit <= 0.0) return 0.0;
  // e^{R - log(1+ghat P1)} - 1 = (theta - ghat P1)/(1 + ghat P1)
  return deficit / (1.0 + g_hat * p.P1) /
         inverse_cdf_approx(p.epsilon, g_hat, p.sigma);
}

inline double p2_power(double g_hat, const HarqPolicy& p) {
  return p.protocol == Protocol::rtd ? p2_rtd(g_hat, p) : p2_inr(g_hat, p);
}

// Pbar = P1 + int_0^{theta/P1} e^{-x} P2(x) dx, adaptive quadrature.
inline double expected_total_power(const HarqPolicy& p) {
  validate(p);
  double hi = p.theta() / p.P1;
  if (hi <= 0.0) return p.P1;
  double tail = mpa::integrate([&](double x) { return std::exp(-x) * p2_power(x, p); },
                               0.0, hi, 1e-12, 1e-8);
  return p.P1 + tail;
}

struct OutageStats {
  double conditional_round2 = 0.0;  // failure rate among retransmissions
  double end_to_end = 0.0;          // both rounds failed / trials
  std::size_t round2_events = 0;
};

// Monte Carlo verification against the exact accumulation rules: round 2
// uses the protocol's combining condition directly, independent of the
// log-linear approximation that sized P2.
inline OutageStats monte_carlo_outage(const HarqPolicy& p, std::size_t trials,
                                      std::uint64_t seed) {
  validate(p);
  Rng rng = substream(seed, 0);
  const double theta = p.theta();
  std::size_t reach2 = 0, fail2 = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    double ghat = rng.exponential();
    if (ghat * p.P1 >= theta) continue;  // decoded in round 1
    ++reach2;
    double P2 = p2_power(ghat, p);
    auto dist = mpa::channel::ConditionalGainDist::make(ghat, p.sigma);
    double g = dist.sample(rng);
    bool ok = p.protocol == Protocol::rtd
                  ? ghat * p.P1 + g * P2 >= theta
                  : std::log1p(ghat * p.P1) + std::log1p(g * P2) >= p.rate_R;
    if (!ok) ++fail2;
  }
  OutageStats st;
  st.round2_events = reach2;
  st.conditional_round2 = reach2 ? static_cast<double>(fail2) / reach2 : 0.0;
  st.end_to_end = static_cast<double>(fail2) / trials;
  return st;
}

// Minimize Pbar over P1 with a decade scan to bracket (unimodality is
// checked, with a dense-scan fallback), then golden-section refinement.
inline PowerResult optimize_p1(Protocol protocol, double R, double epsilon,
                               double sigma, std::size_t mc_trials = 1000000,
                               std::uint64_t seed = 1) {
  HarqPolicy base{protocol, R, epsilon, 1.0, sigma};
  validate(base);
  const double theta = base.theta();
  auto pbar = [&](double log_p1) {
    HarqPolicy p = base;
    p.P1 = std::exp(log_p1);
    return expected_total_power(p);
  };
  const double lo = std::log(theta / 50.0);
  const double hi = std::log(1000.0 * theta);
  const int scan_n = 61;
  std::vector<double> val(scan_n);
  int best = 0;
  for (int i = 0; i < scan_n; ++i) {
    double x = lo + (hi - lo) * i / (scan_n - 1);
    val[i] = pbar(x);
    if (val[i] < val[best]) best = i;
  }
  // Unimodality: a single descending-then-ascending pattern up to noise.
  int sign_changes = 0;
  for (int i = 1; i + 1 < scan_n; ++i)
    if ((val[i] - val[i - 1]) * (val[i + 1] - val[i]) < 0.0) ++sign_changes;
  double step = (hi - lo) / (scan_n - 1);
  double a = lo + step * std::max(0, best - 1);
  double b = lo + step * std::min(scan_n - 1, best + 1);
  if (sign_changes > 1) {
    // Dense scan fallback around the global bracket.
    double fine_best = a;
    double fine_val = pbar(a);
    for (double x = lo; x <= hi; x += (hi - lo) / 2000.0) {
      double v = pbar(x);
      if (v < fine_val) {
        fine_val = v;
        fine_best = x;
      }
    }
    a = fine_best - step;
    b = fine_best + step;
  }
  double log_opt = mpa::golden_min(pbar, a, b, 1e-8);
  HarqPolicy opt = base;
  opt.P1 = std::exp(log_opt);
  PowerResult res;
  res.P1 = opt.P1;
  res.expected_total = expected_total_power(opt);
  res.achieved_outage = monte_carlo_outage(opt, mc_trials, seed).conditional_round2;
  return res;
}

// Jensen sanity: mean of log(1+x_i) vs log(1 + mean x_i); lhs <= rhs.
inline std::pair<double, double> jensen_check(std::span<const double> gains) {
  mpa::detail::require(!gains.empty(), "jensen_check: empty input");
  double lhs = 0.0, mean = 0.0;
  for (double x : gains) {
    mpa::detail::require(x >= 0.0, "jensen_check: gains must be >= 0");
    lhs += std::log1p(x);
    mean += x;
  }
  lhs /= static_cast<double>(gains.size());
  mean /= static_cast<double>(gains.size());
  return {lhs, std::log1p(mean)};
}

}  // namespace mpa::harq
