// SPDX-License-Identifier: Apache-2.0
//
// Reference-grade special functions used throughout the library: modified and
// ordinary Bessel functions of order zero, the first-order Marcum Q-function,
// the upper incomplete gamma function, the exponential integral E1 and the
// principal Lambert W branch.  All routines are pure and reentrant.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace mpa {

struct Tolerance {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  std::uint64_t max_terms = 1000000;
};

namespace detail {

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

inline void require_finite(double x, const char* name) {
  if (!std::isfinite(x))
    throw std::domain_error(std::string(name) + ": non-finite argument");
}

// Neumaier compensated accumulator; long pmf sweeps otherwise leave
// ~1e-12 of rounding residue, visible in the far tails of the CDF.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    c += (std::fabs(s) >= std::fabs(x)) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace detail

// e^{-|x|} I0(x).  Power series below 7.5, asymptotic expansion above; the
// scaled form stays bounded for all x, so products like e^{-a} I0(b) can be
// assembled in log space without overflow.
inline double bessel_i0_scaled(double x) {
  detail::require_finite(x, "bessel_i0_scaled");
  x = std::fabs(x);
  if (x < 7.5) {
    // I0(x) = sum_k (x/2)^{2k} / (k!)^2, all terms positive.
    double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return sum * std::exp(-x);
  }
  // I0(x) ~ e^x/sqrt(2 pi x) sum_k a_k x^{-k}, a_k = ((2k-1)!!)^2/(8^k k!).
  // Summed to the smallest term; the truncation error is ~e^{-2x}.
  double sum = 1.0, term = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 40; ++k) {
    double f = (2.0 * k - 1.0);
    term *= f * f / (8.0 * k * x);
    if (term >= prev) break;  // asymptotic series started diverging
    sum += term;
    prev = term;
    if (term < sum * 1e-17) break;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

inline double bessel_i0(double x) {
  detail::require_finite(x, "bessel_i0");
  detail::require(x >= 0.0, "bessel_i0: x must be >= 0");
  return bessel_i0_scaled(x) * std::exp(x);  // overflows to +inf for x > ~709
}

// J0(x): power series for |x| < 12, Hankel asymptotic expansion beyond.
inline double bessel_j0(double x) {
  detail::require_finite(x, "bessel_j0");
  x = std::fabs(x);
  if (x < 12.0) {
    double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 80; ++k) {
      term *= -q / (static_cast<double>(k) * k);
      sum += term;
      if (std::fabs(term) < 1e-17) break;
    }
    return sum;
  }
  // J0(x) = sqrt(2/(pi x)) [P(x) cos(x - pi/4) - Q(x) sin(x - pi/4)]
  // with P, Q the order-zero Hankel series, truncated at the smallest term.
  const double inv = 1.0 / x;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 30; ++k) {
    double f = 2.0 * k - 1.0;
    term *= f * f / (8.0 * k) * inv;
    double mag = std::fabs(term);
    if (mag >= prev) break;
    prev = mag;
    if (k % 2 == 1) {
      q += (k % 4 == 1) ? -term : term;  // k = 1,5,9,... negative
    } else {
      p += (k % 4 == 2) ? -term : term;  // k = 2,6,10,... negative
    }
    if (mag < 1e-17) break;
  }
  const double chi = x - 0.25 * M_PI;
  return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// First-order Marcum Q-function Q1(a, b).
//
// Poisson-weighted mixture of regularized gamma tails,
//   Q1(a,b) = sum_k pois(k; a^2/2) * P[Poisson(b^2/2) <= k],
// accumulated outward from the modal Poisson index so that both large and
// small arguments are handled without overflow.  Truncates once the residual
// Poisson mass drops below tol.abs_tol.
inline double marcum_q1(double a, double b, const Tolerance& tol = {}) {
  detail::require_finite(a, "marcum_q1");
  detail::require_finite(b, "marcum_q1");
  detail::require(a >= 0.0 && b >= 0.0, "marcum_q1: arguments must be >= 0");
  if (b == 0.0) return 1.0;
  const double u = 0.5 * a * a;
  const double w = 0.5 * b * b;
  if (u == 0.0) return std::exp(-w);

  const std::int64_t m0 = static_cast<std::int64_t>(std::floor(u));
  const double lp0 = m0 * std::log(u) - u - std::lgamma(static_cast<double>(m0) + 1.0);
  const double lt0 = m0 * std::log(w) - w - std::lgamma(static_cast<double>(m0) + 1.0);
  double p0 = std::exp(lp0);
  double t0 = std::exp(lt0);

  // G_{m0} = P[Poisson(w) <= m0], summed downward from the starting index.
  // If the starting pmf is at (or below) denormal range it carries almost no
  // mantissa, so the rebuilt sum would be noise; the pmf values inside the
  // +-sqrt(2 u log(1/tol)) band that the outward sweeps visit are then far
  // below double range anyway, and the indicator is exact to ~1e-300.
  double g0;
  const double spread = 45.0 * std::sqrt(w + 1.0) + 45.0;
  if (lt0 < -690.0 || static_cast<double>(m0) > w + spread) {
    // Starting pmf underflows, or m0 sits far above the Poisson(w) bulk:
    // the CDF is an indicator to well below double resolution, and the
    // pmf within the outward sweeps' band is negligible.
    if (static_cast<double>(m0) > w) {
      t0 = (lt0 < -690.0) ? 0.0 : t0;
      g0 = 1.0;
    } else {
      t0 = 0.0;
      g0 = 0.0;
    }
  } else {
    // The bulk is at most ~spread indices below m0, so this stays O(sqrt w).
    detail::KahanSum gs;
    gs.add(t0);
    double t = t0;
    for (std::int64_t j = m0; j >= 1; --j) {
      t *= static_cast<double>(j) / w;
      gs.add(t);
      if (t < gs.value() * 1e-18) break;
    }
    g0 = gs.value();
  }

  detail::KahanSum q, consumed;
  q.add(p0 * g0);
  consumed.add(p0);

  // Upward sweep k = m0+1, m0+2, ...
  {
    double p = p0, t = t0;
    detail::KahanSum g;
    g.add(g0);
    std::uint64_t steps = 0;
    for (std::int64_t k = m0 + 1; consumed.value() < 1.0 - tol.abs_tol; ++k) {
      p *= u / static_cast<double>(k);
      t *= w / static_cast<double>(k);
      g.add(t);
      q.add(p * std::min(g.value(), 1.0));
      consumed.add(p);
      if (++steps > tol.max_terms)
        throw std::runtime_error("marcum_q1: series did not converge (upward)");
      if (p < 1e-300) break;  // denormal p would stall the recurrence
    }
  }
  // Downward sweep k = m0-1, ..., 0.
  {
    double p = p0, t = t0;
    detail::KahanSum g;
    g.add(g0);
    for (std::int64_t k = m0; k >= 1 && consumed.value() < 1.0 - tol.abs_tol; --k) {
      g.add(-t);                           // G_{k-1} = G_k - pmf(k; w)
      t *= static_cast<double>(k) / w;     // pmf(k-1; w)
      p *= static_cast<double>(k) / u;     // pois(k-1; u)
      q.add(p * std::min(std::max(g.value(), 0.0), 1.0));
      consumed.add(p);
      if (p < 1e-300) break;
    }
  }
  return std::min(1.0, std::max(0.0, q.value()));
}

// Upper incomplete gamma Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt, s > 0.
// Series for the lower function when x < s+1, Lentz continued fraction above.
inline double upper_incomplete_gamma(double s, double x) {
  detail::require_finite(s, "upper_incomplete_gamma");
  detail::require_finite(x, "upper_incomplete_gamma");
  detail::require(s > 0.0, "upper_incomplete_gamma: s must be > 0");
  detail::require(x >= 0.0, "upper_incomplete_gamma: x must be >= 0");
  const double lg = std::lgamma(s);
  if (x == 0.0) return std::exp(lg);
  if (x < s + 1.0) {
    // gamma(s,x) series; Gamma(s,x) = Gamma(s) - gamma(s,x).
    double ap = s;
    double term = 1.0 / s;
    double sum = term;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16) {
        double lower = sum * std::exp(-x + s * std::log(x));
        return std::max(0.0, std::exp(lg) - lower);
      }
    }
    throw std::runtime_error("upper_incomplete_gamma: series did not converge");
  }
  // Continued fraction Gamma(s,x) = e^{-x} x^s / (x+1-s- 1(1-s)/(x+3-s- ...)).
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16)
      return std::exp(-x + s * std::log(x)) * h;
  }
  throw std::runtime_error("upper_incomplete_gamma: continued fraction did not converge");
}

// e^x E1(x) for x > 0.  The scaled form is the natural building block for
// products e^{large} E1(large) that appear in the closed-form integrals.
inline double exp_e1_scaled(double x) {
  detail::require_finite(x, "exp_e1_scaled");
  detail::require(x > 0.0, "exp_e1_scaled: x must be > 0");
  if (x <= 1.0) {
    // E1(x) = -gamma - ln x + sum (-1)^{k+1} x^k / (k k!)
    constexpr double euler = 0.57721566490153286060651209;
    double sum = -euler - std::log(x);
    double term = 1.0;
    for (int k = 1; k < 40; ++k) {
      term *= -x / k;
      sum -= term / k;
      if (std::fabs(term / k) < 1e-18) break;
    }
    return std::exp(x) * sum;
  }
  // Lentz continued fraction for e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...))).
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 300; ++i) {
    double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) return h;
  }
  throw std::runtime_error("exp_e1_scaled: continued fraction did not converge");
}

inline double exp_integral_e1(double x) {
  detail::require(std::isfinite(x) && x > 0.0, "exp_integral_e1: x must be > 0");
  return std::exp(-x) * exp_e1_scaled(x);
}

// Principal branch W0 of the Lambert W function, x >= -1/e.
// Seeded with log(x) - log(log(x)) for large x (or the branch-point series
// near -1/e), then polished with Halley steps.
inline double lambert_w0(double x) {
  detail::require_finite(x, "lambert_w0");
  constexpr double inv_e = 0.36787944117144232159552377;
  detail::require(x >= -inv_e - 1e-12, "lambert_w0: x must be >= -1/e");
  if (x == 0.0) return 0.0;
  double w;
  if (x >= M_E) {
    double lx = std::log(x);
    w = lx - std::log(lx);
  } else if (x < -0.3) {
    // Branch-point expansion around w = -1.
    double p = std::sqrt(std::max(0.0, 2.0 * (M_E * x + 1.0)));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (std::fabs(x) <= 0.3) {
    w = x * (1.0 - x + 1.5 * x * x);
  } else {
    w = x / (1.0 + x);
  }
  if (w <= -1.0) w = -0.999999;
  for (int it = 0; it < 30; ++it) {
    double ew = std::exp(w);
    double f = w * ew - x;
    double w1 = w + 1.0;
    double denom = ew * w1 - (w + 2.0) * f / (2.0 * w1);
    double dw = f / denom;
    w -= dw;
    if (std::fabs(dw) <= 1e-14 * (std::fabs(w) + 1e-14)) break;
  }
  return w;
}

}  // namespace mpa
