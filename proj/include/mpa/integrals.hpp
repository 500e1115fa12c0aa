// SPDX-License-Identifier: Apache-2.0
//
// Closed-form approximations of the two Marcum-Q integral families
//
//   G(alpha, rho) = int_rho^inf e^{-n x} x^m (1 - Q1(alpha, x)) dx
//   T(alpha, m, a, t1, t2) = int_{t1}^{t2} e^{-m x} log(1 + a x) Q1(alpha, x) dx
//
// built from the semi-linear CDF pieces, together with adaptive-quadrature
// oracles that evaluate the integrands directly.
#pragma once

#include <cmath>
#include <limits>

#include "mpa/marcum_approx.hpp"
#include "mpa/quadrature.hpp"
#include "mpa/special.hpp"

namespace mpa::integrals {

struct GIntegralSpec {
  double alpha = 0.0;
  double rho = 0.0;   // lower limit
  double m = 0.0;     // power exponent
  double n = 1.0;     // exponential rate
};

struct TIntegralSpec {
  double alpha = 0.0;
  double m = 0.0;     // exponential rate; 0 selects the log-only variant
  double a = 1.0;     // log argument scale
  double theta1 = 0.0;
  double theta2 = std::numeric_limits<double>::infinity();
};

namespace detail {

inline void validate(const GIntegralSpec& s) {
  mpa::detail::require_finite(s.alpha, "g integral");
  mpa::detail::require(s.alpha >= 0.0 && s.rho >= 0.0 && s.m >= 0.0 && s.n > 0.0,
                       "g integral: need alpha,rho,m >= 0 and n > 0");
}

inline void validate(const TIntegralSpec& s) {
  mpa::detail::require_finite(s.alpha, "t integral");
  mpa::detail::require(s.alpha >= 0.0 && s.a > 0.0 && s.m >= 0.0,
                       "t integral: need alpha,m >= 0 and a > 0");
  mpa::detail::require(s.theta1 >= 0.0 && s.theta2 > s.theta1,
                       "t integral: need theta2 > theta1 >= 0");
}

}  // namespace detail

// The breakpoint formulas degenerate for very small alpha; results are still
// returned there but should be treated as out of regime.
inline bool g_degenerate_regime(const GIntegralSpec& s) { return s.alpha < 0.05; }

inline double g_closed_form(const GIntegralSpec& s) {
  detail::validate(s);
  mpa::detail::require(s.alpha > 0.0, "g_closed_form: alpha must be > 0");
  const auto p = mpa::semilinear::build_params(s.alpha, mpa::semilinear::Variant::coro3);
  const double s2pi = std::sqrt(2.0 * M_PI);
  const double nm1 = std::pow(s.n, -s.m - 1.0);
  if (s.rho >= p.c2)
    return mpa::upper_incomplete_gamma(s.m + 1.0, s.n * s.rho) * nm1;

  const double lo = std::max(p.c1, s.rho);
  const double g1_lo = mpa::upper_incomplete_gamma(s.m + 1.0, s.n * lo);
  const double g1_c2 = mpa::upper_incomplete_gamma(s.m + 1.0, s.n * p.c2);
  const double g2_lo = mpa::upper_incomplete_gamma(s.m + 2.0, s.n * lo);
  const double g2_c2 = mpa::upper_incomplete_gamma(s.m + 2.0, s.n * p.c2);
  // Line written as x/sqrt(2 pi) + k.
  const double k = -s.alpha / s2pi + 0.5 * (1.0 - 1.0 / (s2pi * s.alpha));
  return g1_c2 * nm1 + k * nm1 * (g1_lo - g1_c2) +
         (g2_lo - g2_c2) * std::pow(s.n, -s.m - 2.0) / s2pi;
}

inline double g_quadrature_oracle(const GIntegralSpec& s, const Tolerance& tol = {}) {
  detail::validate(s);
  auto f = [&](double x) {
    return std::exp(-s.n * x) * std::pow(x, s.m) *
           (1.0 - mpa::marcum_q1(s.alpha, x, tol));
  };
  // Cut where the envelope integral int_X^inf e^{-nx} x^m dx drops below the
  // absolute tolerance; the integrand is bounded by the envelope.
  double cut = s.rho + (s.alpha + 2.0) + 40.0 / s.n;
  while (mpa::upper_incomplete_gamma(s.m + 1.0, s.n * cut) *
             std::pow(s.n, -s.m - 1.0) >
         0.5 * tol.abs_tol)
    cut *= 1.5;
  if (cut <= s.rho) return 0.0;
  // Split at the semi-linear breakpoints: the integrand is smooth but changes
  // character there, and the pieces keep the adaptive recursion shallow.
  double total = 0.0;
  double prev = s.rho;
  if (s.alpha > 0.0) {
    const auto p = mpa::semilinear::build_params(s.alpha, mpa::semilinear::Variant::lemma1);
    for (double b : {p.c1, p.c2}) {
      if (b > prev && b < cut) {
        total += mpa::integrate(f, prev, b, 0.25 * tol.abs_tol, 1e-10);
        prev = b;
      }
    }
  }
  total += mpa::integrate(f, prev, cut, 0.25 * tol.abs_tol, 1e-10);
  return total;
}

namespace detail {

struct TParts {
  double c1, c2, n1, n2;
};

inline TParts t_parts(double alpha) {
  const auto p = mpa::semilinear::build_params(alpha, mpa::semilinear::Variant::lemma1);
  // Line for Q1 itself (not the CDF): Q1 ~ n2 x + n1 on [c1, c2].
  return {p.c1, p.c2, p.o1 * p.o2 + 1.0 - p.o3, -p.o1};
}

}  // namespace detail

// Antiderivative of e^{-mx} log(1+ax); the e^{m/a} E1(m x + m/a) product is
// assembled from the scaled E1 so it cannot overflow.
inline double t_antideriv_plain(double x, double m, double a) {
  if (std::isinf(x)) return 0.0;
  double e = std::exp(-m * x);
  return -(e / m) * (mpa::exp_e1_scaled(m * (x + 1.0 / a)) + std::log1p(a * x));
}

// Antiderivative of (n2 x + n1) e^{-mx} log(1+ax).
inline double t_antideriv_line(double x, double m, double a, double n1, double n2) {
  if (std::isinf(x)) return 0.0;
  double e = std::exp(-m * x);
  double lg = std::log1p(a * x);
  double scaled_e1 = e * mpa::exp_e1_scaled(m * (x + 1.0 / a));
  return -e * (m * n2 * x + n2 + m * n1) * lg / (m * m) - n2 * e / (m * m) +
         (m * n2 - a * n2 - a * m * n1) / (a * m * m) * scaled_e1;
}

inline double t_closed_form(const TIntegralSpec& s) {
  detail::validate(s);
  mpa::detail::require(s.m > 0.0, "t_closed_form: m must be > 0 (use the m=0 form)");
  const auto tp = detail::t_parts(s.alpha);
  auto f1 = [&](double x) { return t_antideriv_plain(x, s.m, s.a); };
  auto f2 = [&](double x) { return t_antideriv_line(x, s.m, s.a, tp.n1, tp.n2); };
  const double hi = std::min(tp.c2, s.theta2);
  if (s.theta1 >= tp.c2) return 0.0;
  if (s.theta1 >= tp.c1) return f2(hi) - f2(s.theta1);
  if (s.theta2 >= tp.c1)
    return f1(tp.c1) - f1(s.theta1) + f2(hi) - f2(tp.c1);
  return f1(s.theta2) - f1(s.theta1);
}

// Antiderivative of log(1+ax).
inline double t_antideriv_plain0(double x, double a) {
  return (a * x + 1.0) * (std::log1p(a * x) - 1.0) / a;
}

// Antiderivative of (n2 x + n1) log(1+ax).
inline double t_antideriv_line0(double x, double a, double n1, double n2) {
  double lg = std::log1p(a * x);
  double first = n2 *
                 ((2.0 * a * a * x * x - 2.0) * lg - a * a * x * x + 2.0 * a * x) /
                 (4.0 * a * a);
  return first + n1 * (a * x + 1.0) * (lg - 1.0) / a;
}

inline double t_zero_m_closed_form(const TIntegralSpec& s) {
  detail::validate(s);
  mpa::detail::require(s.m == 0.0, "t_zero_m_closed_form: m must be 0");
  mpa::detail::require(std::isfinite(s.theta2),
                       "t_zero_m_closed_form: theta2 must be finite when m = 0");
  const auto tp = detail::t_parts(s.alpha);
  auto f3 = [&](double x) { return t_antideriv_plain0(x, s.a); };
  auto f4 = [&](double x) { return t_antideriv_line0(x, s.a, tp.n1, tp.n2); };
  const double hi = std::min(tp.c2, s.theta2);
  if (s.theta1 >= tp.c2) return 0.0;
  if (s.theta1 >= tp.c1) return f4(hi) - f4(s.theta1);
  if (s.theta2 >= tp.c1)
    return f3(tp.c1) - f3(s.theta1) + f4(hi) - f4(tp.c1);
  return f3(s.theta2) - f3(s.theta1);
}

// Finite stand-in for theta2 = inf in the m = 0 family: beyond
// alpha + sqrt(-2 log tol) the Gaussian-type decay of Q1 pushes the remaining
// mass below tol.
inline double t_theta2_surrogate(double alpha, double tol = 1e-12) {
  return alpha + std::sqrt(-2.0 * std::log(tol)) + 2.0;
}

inline double t_quadrature_oracle(const TIntegralSpec& s, const Tolerance& tol = {}) {
  detail::validate(s);
  auto f = [&](double x) {
    return std::exp(-s.m * x) * std::log1p(s.a * x) *
           mpa::marcum_q1(s.alpha, x, tol);
  };
  double hi = s.theta2;
  if (std::isinf(hi)) {
    mpa::detail::require(s.m > 0.0,
                         "t_quadrature_oracle: theta2 = inf requires m > 0");
    hi = t_theta2_surrogate(s.alpha, tol.abs_tol) + 40.0 / s.m;
  }
  double total = mpa::integrate(f, s.theta1, std::min(hi, s.theta1 + 8.0),
                                0.25 * tol.abs_tol, 1e-10);
  double lo = std::min(hi, s.theta1 + 8.0);
  while (lo < hi) {
    double next = std::min(hi, lo * 1.5 + 4.0);
    double piece = mpa::integrate(f, lo, next, 0.25 * tol.abs_tol, 1e-10);
    total += piece;
    lo = next;
    if (std::fabs(piece) < 0.25 * tol.abs_tol) break;
  }
  return total;
}

struct ComparisonRow {
  char family;  // 'g' or 't'
  double alpha;
  double m;
  double n_or_a;
  double rho_or_theta1;
  double theta2;  // unused (0) for the g family
  double closed_form;
  double oracle;
  double rel_err;  // |closed - oracle| / max(|oracle|, 1e-3)
};

inline double comparison_rel_err(double closed, double oracle) {
  return std::fabs(closed - oracle) / std::max(std::fabs(oracle), 1e-3);
}

}  // namespace mpa::integrals
