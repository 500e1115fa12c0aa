// SPDX-License-Identifier: Apache-2.0
//
// Semi-linear (three piece: 0 / tangent line / 1) approximation of the CDF
// y(alpha, beta) = 1 - Q1(alpha, beta).  The line is anchored at the
// inflection point of the CDF and clipped where it exits [0, 1]; the four
// variants differ in how the anchor and slope are simplified.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mpa/special.hpp"

namespace mpa::semilinear {

enum class Variant { lemma1, coro1, coro2, coro3 };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::lemma1: return "lemma1";
    case Variant::coro1: return "coro1";
    case Variant::coro2: return "coro2";
    case Variant::coro3: return "coro3";
  }
  return "?";
}

struct SemiLinearParams {
  double alpha = 0.0;
  Variant variant = Variant::lemma1;
  double x0 = 0.0;       // tangent abscissa
  double y0 = 0.0;       // CDF value at x0, clamped to [0, 1]
  double slope_m = 0.0;  // line slope at x0
  double c1 = 0.0;       // lower breakpoint (clamped at 0)
  double c2 = 0.0;       // upper breakpoint
  double o1 = 0.0, o2 = 0.0, o3 = 0.0;  // generalized line: o1 (b - o2) + o3
  bool outside_regime = false;  // variant used outside its stated alpha range
};

namespace detail {

// slope of 1 - Q1(alpha, .) at x:  x e^{-(alpha^2+x^2)/2} I0(alpha x)
inline double cdf_slope(double alpha, double x) {
  double ax = alpha * x;
  return x * std::exp(ax - 0.5 * (alpha * alpha + x * x)) *
         mpa::bessel_i0_scaled(ax);
}

}  // namespace detail

inline SemiLinearParams build_params(double alpha, Variant variant) {
  mpa::detail::require_finite(alpha, "build_params");
  mpa::detail::require(alpha >= 0.0, "build_params: alpha must be >= 0");

  SemiLinearParams p;
  p.alpha = alpha;
  p.variant = variant;

  switch (variant) {
    case Variant::lemma1: {
      p.x0 = 0.5 * (alpha + std::sqrt(alpha * alpha + 2.0));
      p.slope_m = detail::cdf_slope(alpha, p.x0);
      p.y0 = 1.0 - mpa::marcum_q1(alpha, p.x0);
      p.o1 = p.slope_m;
      p.o2 = p.x0;
      p.o3 = p.y0;
      break;
    }
    case Variant::coro1: {
      mpa::detail::require(alpha > 0.0, "build_params: coro1 needs alpha > 0");
      p.x0 = alpha;
      double i0e = mpa::bessel_i0_scaled(alpha * alpha);
      p.slope_m = alpha * i0e;
      p.y0 = 0.5 * (1.0 - i0e);  // 1 - Q1(a,a) via the closed identity
      p.o1 = p.slope_m;
      p.o2 = p.x0;
      p.o3 = p.y0;
      p.outside_regime = alpha < 1.0;
      break;
    }
    case Variant::coro2: {
      p.x0 = 0.5 * (alpha + std::sqrt(2.0));
      p.slope_m = detail::cdf_slope(alpha, p.x0);
      p.y0 = 1.0 - mpa::marcum_q1(alpha, p.x0);
      p.o1 = p.slope_m;
      p.o2 = p.x0;
      p.o3 = p.y0;
      break;
    }
    case Variant::coro3: {
      mpa::detail::require(alpha > 0.0, "build_params: coro3 needs alpha > 0");
      const double s2pi = std::sqrt(2.0 * M_PI);
      p.x0 = alpha;
      p.slope_m = 1.0 / s2pi;
      p.o1 = p.slope_m;
      p.o2 = alpha;
      p.o3 = 0.5 * (1.0 - 1.0 / (s2pi * alpha));
      p.y0 = std::clamp(p.o3, 0.0, 1.0);
      p.outside_regime = alpha < 1.0;
      break;
    }
  }

  mpa::detail::require(p.slope_m > 0.0, "build_params: degenerate slope");

  // Breakpoints from the line hitting 0 and 1.
  double c1_line = p.o2 - p.o3 / p.o1;
  double c2_line = p.o2 + (1.0 - p.o3) / p.o1;

  if (variant == Variant::coro2) {
    // coro2 has alternative breakpoints that divide by slope*x0 and add
    // alpha rather than x0.  Keep them only if the line actually reaches
    // 0/1 there; otherwise fall back to the lemma1 pattern at this x0.
    double denom = p.x0 * p.slope_m;
    double c1_alt = alpha - p.y0 / denom;
    double c2_alt = alpha + (1.0 - p.y0) / denom;
    double at_c2 = p.o1 * (c2_alt - p.o2) + p.o3;
    double at_c1 = p.o1 * (c1_alt - p.o2) + p.o3;
    if (std::fabs(at_c2 - 1.0) <= 1e-9 && std::fabs(at_c1) <= 1e-9) {
      c1_line = c1_alt;
      c2_line = c2_alt;
    }
  }

  p.c1 = std::max(0.0, c1_line);
  p.c2 = c2_line;
  return p;
}

inline double approx_cdf(const SemiLinearParams& p, double beta) {
  mpa::detail::require_finite(beta, "approx_cdf");
  mpa::detail::require(beta >= 0.0, "approx_cdf: beta must be >= 0");
  if (beta < p.c1) return 0.0;
  if (beta > p.c2) return 1.0;
  return std::clamp(p.o1 * (beta - p.o2) + p.o3, 0.0, 1.0);
}

inline double approx_q1(const SemiLinearParams& p, double beta) {
  return 1.0 - approx_cdf(p, beta);
}

struct ErrorSurfaceRow {
  double alpha;
  Variant variant;
  std::string region;  // "midrange" or "tails"
  double max_abs_err;
  double mean_abs_err;
};

// Absolute error of the semi-linear CDF against the Marcum-Q reference,
// scanned on a beta grid; midrange [c1, c2] and tails reported separately
// (tail error is informational, the approximation is not expected to be
// tight there).
inline std::vector<ErrorSurfaceRow> error_report(
    const std::vector<double>& alpha_grid, double beta_resolution) {
  mpa::detail::require(!alpha_grid.empty(), "error_report: empty alpha grid");
  mpa::detail::require(beta_resolution > 0.0, "error_report: bad resolution");

  std::vector<ErrorSurfaceRow> rows;
  const Variant variants[] = {Variant::lemma1, Variant::coro1, Variant::coro2,
                              Variant::coro3};
  for (double alpha : alpha_grid) {
    for (Variant v : variants) {
      if (alpha == 0.0 && (v == Variant::coro1 || v == Variant::coro3))
        continue;
      SemiLinearParams p = build_params(alpha, v);
      double beta_max = p.c2 + std::max(1.0, p.c2 - p.c1);
      double mid_max = 0.0, mid_sum = 0.0, tail_max = 0.0, tail_sum = 0.0;
      std::size_t mid_n = 0, tail_n = 0;
      for (double b = 0.0; b <= beta_max; b += beta_resolution) {
        double err = std::fabs(approx_cdf(p, b) - (1.0 - mpa::marcum_q1(alpha, b)));
        if (b >= p.c1 && b <= p.c2) {
          mid_max = std::max(mid_max, err);
          mid_sum += err;
          ++mid_n;
        } else {
          tail_max = std::max(tail_max, err);
          tail_sum += err;
          ++tail_n;
        }
      }
      rows.push_back({alpha, v, "midrange", mid_max,
                      mid_n ? mid_sum / mid_n : 0.0});
      rows.push_back({alpha, v, "tails", tail_max,
                      tail_n ? tail_sum / tail_n : 0.0});
    }
  }
  return rows;
}

}  // namespace mpa::semilinear
