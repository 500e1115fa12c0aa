// SPDX-License-Identifier: Apache-2.0
//
// Throughput-optimized rate adaptation on the predictor-antenna channel:
// instantaneous throughput and outage, the grid-search rate oracle, the
// Lambert-W closed form built on the semi-linear pieces, and Monte Carlo
// expected throughput with genie / no-CSIT baselines.
#pragma once

#include <cmath>
#include <cstdint>

#include "mpa/channel.hpp"
#include "mpa/marcum_approx.hpp"
#include "mpa/optimize.hpp"
#include "mpa/rng.hpp"
#include "mpa/special.hpp"

namespace mpa::rate {

struct RatePolicy {
  double power_P = 1.0;   // linear SNR (unit noise)
  double rate_R = 0.0;    // nats per channel use
  mpa::semilinear::Variant variant = mpa::semilinear::Variant::lemma1;
};

struct ThroughputResult {
  double eta = 0.0;        // npcu
  double outage = 0.0;
  double rate_used = 0.0;  // npcu
};

inline ThroughputResult instantaneous_throughput(
    const mpa::channel::ConditionalGainDist& dist, const RatePolicy& policy) {
  mpa::detail::require(policy.power_P > 0.0 && policy.rate_R >= 0.0,
                       "instantaneous_throughput: need P > 0, R >= 0");
  double threshold = std::expm1(policy.rate_R) / policy.power_P;
  double outage = dist.cdf(threshold);
  return {policy.rate_R * (1.0 - outage), outage, policy.rate_R};
}

// Grid search at 2^-8 npcu up to the 99.99% quantile rate, then
// golden-section refinement to 2^-20 npcu.
inline double optimal_rate_oracle(const mpa::channel::ConditionalGainDist& dist,
                                  double P) {
  mpa::detail::require(P > 0.0, "optimal_rate_oracle: P must be > 0");
  if (dist.degenerate())
    return std::log1p(dist.noncentrality_coeff * dist.g_hat * P);
  double x_hi = dist.quantile(0.9999);
  double r_hi = std::log1p(P * x_hi);
  if (r_hi <= 0.0) return 0.0;
  auto eta = [&](double r) {
    return r * (1.0 - dist.cdf(std::expm1(r) / P));
  };
  constexpr double coarse = 1.0 / 256.0;
  constexpr double fine = 1.0 / 1048576.0;
  return mpa::grid_then_golden_max(eta, 0.0, r_hi, coarse, fine);
}

namespace detail {

// Lambert argument y = (1 + o1 o2 - o3) e sqrt(2 P s^2) / (2 o1).
inline double lambert_argument(const mpa::semilinear::SemiLinearParams& p,
                               double P, double sigma_eff2) {
  double num = 1.0 + p.o1 * p.o2 - p.o3;
  if (num <= 0.0) return -1.0;  // clamps the rate to zero downstream
  return num * M_E * std::sqrt(2.0 * P * sigma_eff2) / (2.0 * p.o1);
}

inline mpa::semilinear::SemiLinearParams params_for(
    double alpha, mpa::semilinear::Variant variant) {
  using mpa::semilinear::Variant;
  // coro1/coro3 are undefined at alpha = 0 (Rayleigh conditional); the
  // lemma1 anchor covers that corner.
  if (alpha <= 0.0 && (variant == Variant::coro1 || variant == Variant::coro3))
    variant = Variant::lemma1;
  return mpa::semilinear::build_params(alpha, variant);
}

}  // namespace detail

// Closed-form rate R = max(0, 2 (W(y) - 1)).
inline double optimal_rate_closed_form(
    const mpa::channel::ConditionalGainDist& dist, double P,
    mpa::semilinear::Variant variant = mpa::semilinear::Variant::lemma1) {
  mpa::detail::require(P > 0.0, "optimal_rate_closed_form: P must be > 0");
  if (dist.degenerate())
    return std::log1p(dist.noncentrality_coeff * dist.g_hat * P);
  auto p = detail::params_for(dist.alpha(), variant);
  double y = detail::lambert_argument(p, P, dist.sigma_eff * dist.sigma_eff);
  if (y < -0.367879441171442) return 0.0;
  return std::max(0.0, 2.0 * (mpa::lambert_w0(y) - 1.0));
}

// log - loglog simplification of the closed form; valid for y > e, falls
// back to the Lambert form below that.
inline double optimal_rate_log_approx(
    const mpa::channel::ConditionalGainDist& dist, double P,
    mpa::semilinear::Variant variant = mpa::semilinear::Variant::lemma1) {
  mpa::detail::require(P > 0.0, "optimal_rate_log_approx: P must be > 0");
  if (dist.degenerate())
    return std::log1p(dist.noncentrality_coeff * dist.g_hat * P);
  auto p = detail::params_for(dist.alpha(), variant);
  double y = detail::lambert_argument(p, P, dist.sigma_eff * dist.sigma_eff);
  if (y <= M_E) return optimal_rate_closed_form(dist, P, variant);
  double ly = std::log(y);
  return std::max(0.0, 2.0 * ly - 2.0 * std::log(ly) - 2.0);
}

// Fixed-rate optimum over the Exp(1) marginal (no CSIT): argmax R e^{-(e^R-1)/P}.
inline double no_csit_optimal_rate(double P) {
  mpa::detail::require(P > 0.0, "no_csit_optimal_rate: P must be > 0");
  auto eta = [&](double r) { return r * std::exp(-std::expm1(r) / P); };
  double r_hi = std::log1p(P * 20.0);
  return mpa::grid_then_golden_max(eta, 0.0, r_hi, 1.0 / 256.0, 1e-8);
}

// E[log(1+gP)] for g ~ Exp(1): e^{1/P} E1(1/P).
inline double genie_throughput_closed(double P) {
  mpa::detail::require(P > 0.0, "genie_throughput_closed: P must be > 0");
  return mpa::exp_e1_scaled(1.0 / P);
}

enum class PolicyKind { adaptive, genie, no_csit };

inline const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::adaptive: return "adaptive";
    case PolicyKind::genie: return "genie";
    case PolicyKind::no_csit: return "no_csit";
  }
  return "?";
}

// Expected throughput averaged over ghat ~ Exp(1) realizations.
//  adaptive: closed-form rate per realization, analytic success probability.
//  genie:    E[log(1+gP)] by Monte Carlo over the Exp(1) marginal.
//  no_csit:  single ergodic-optimal fixed rate (deterministic).
inline ThroughputResult expected_throughput(
    const mpa::channel::MismatchModel& model, double P, PolicyKind kind,
    std::size_t samples, std::uint64_t seed,
    mpa::semilinear::Variant variant = mpa::semilinear::Variant::lemma1) {
  mpa::detail::require(samples >= 1, "expected_throughput: samples must be >= 1");
  mpa::detail::require(P > 0.0, "expected_throughput: P must be > 0");

  if (kind == PolicyKind::no_csit) {
    double r = no_csit_optimal_rate(P);
    double out = 1.0 - std::exp(-std::expm1(r) / P);
    return {r * (1.0 - out), out, r};
  }

  Rng rng = substream(seed, 0);
  mpa::detail::KahanSum eta_sum, outage_sum, rate_sum;
  for (std::size_t i = 0; i < samples; ++i) {
    double ghat = rng.exponential();
    if (kind == PolicyKind::genie) {
      eta_sum.add(std::log1p(ghat * P));
      continue;
    }
    auto dist = mpa::channel::ConditionalGainDist::make(ghat, model.sigma, model.kappa);
    double r = optimal_rate_closed_form(dist, P, variant);
    RatePolicy pol{P, r, variant};
    auto inst = instantaneous_throughput(dist, pol);
    eta_sum.add(inst.eta);
    outage_sum.add(inst.outage);
    rate_sum.add(r);
  }
  double n = static_cast<double>(samples);
  return {eta_sum.value() / n, outage_sum.value() / n, rate_sum.value() / n};
}

}  // namespace mpa::rate
