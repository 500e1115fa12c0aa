// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "mpa/marcum_approx.hpp"

using mpa::semilinear::SemiLinearParams;
using mpa::semilinear::Variant;
using mpa::semilinear::approx_cdf;
using mpa::semilinear::approx_q1;
using mpa::semilinear::build_params;

TEST_CASE("lemma1 tangent point") {
  auto p0 = build_params(0.0, Variant::lemma1);
  CHECK(p0.x0 == Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));

  auto p = build_params(2.0, Variant::lemma1);
  // x0 solves 2x^2 - 2 a x - 1 = 0.
  CHECK(2.0 * p.x0 * p.x0 - 4.0 * p.x0 - 1.0 == Approx(0.0).margin(1e-12));
  CHECK(p.y0 == Approx(1.0 - mpa::marcum_q1(2.0, p.x0)).margin(1e-10));
  CHECK(p.c1 >= 0.0);
  CHECK(p.c1 <= p.x0);
  CHECK(p.x0 <= p.c2);

  // Corollary 1 shifts the tangent point by (sqrt(a^2+2)-a)/2.
  auto pc = build_params(1.0, Variant::coro1);
  CHECK(p.x0 - p.alpha >= 0.0);
  CHECK(build_params(1.0, Variant::lemma1).x0 - pc.x0 ==
        Approx(0.5 * (std::sqrt(3.0) - 1.0)).epsilon(1e-12));

  CHECK_THROWS_AS(build_params(-0.5, Variant::lemma1), std::domain_error);
}

TEST_CASE("tangency and breakpoint consistency") {
  for (double a : {0.0, 0.1, 0.5, 1.0, 2.0, 4.0}) {
    for (Variant v : {Variant::lemma1, Variant::coro1, Variant::coro2, Variant::coro3}) {
      if (a == 0.0 && v != Variant::lemma1 && v != Variant::coro2) continue;
      auto p = build_params(a, v);
      INFO("alpha=" << a << " variant=" << to_string(v));
      // Line reaches 0 at c1 (unless clamped) and 1 at c2.
      if (p.c1 > 0.0)
        CHECK(p.o1 * (p.c1 - p.o2) + p.o3 == Approx(0.0).margin(1e-9));
      CHECK(p.o1 * (p.c2 - p.o2) + p.o3 == Approx(1.0).margin(1e-9));
      CHECK(approx_cdf(p, p.x0) == Approx(p.y0).margin(1e-12));
    }
  }
  // lemma1 variant tangency against the exact CDF, value and slope.
  for (double a : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    auto p = build_params(a, Variant::lemma1);
    double exact = 1.0 - mpa::marcum_q1(a, p.x0);
    CHECK(std::fabs(approx_cdf(p, p.x0) - exact) < 1e-10);
    double h = 1e-6;
    double fd = (mpa::marcum_q1(a, p.x0 - h) - mpa::marcum_q1(a, p.x0 + h)) / (2 * h);
    CHECK(fd == Approx(p.slope_m).epsilon(1e-6));
  }
}

TEST_CASE("piecewise structure") {
  auto p = build_params(2.0, Variant::lemma1);
  CHECK(approx_cdf(p, 0.0) == 0.0);
  CHECK(approx_q1(p, 0.0) == 1.0);
  CHECK(approx_q1(p, p.c2 + 1.0) == 0.0);
  CHECK(approx_q1(p, p.x0) == Approx(mpa::marcum_q1(2.0, p.x0)).margin(1e-10));

  // Continuous and nondecreasing in beta; at most three linear pieces.
  for (double a : {0.1, 1.0, 2.0, 3.0}) {
    for (Variant v : {Variant::lemma1, Variant::coro1, Variant::coro2, Variant::coro3}) {
      auto q = build_params(a, v);
      double prev = 0.0;
      double prev_b = 0.0;
      for (double b = 0.0; b < q.c2 + 2.0; b += 1e-3) {
        double y = approx_cdf(q, b);
        CHECK(y >= prev - 1e-12);
        CHECK(std::fabs(y - prev) <= q.o1 * (b - prev_b) + 1e-9);
        prev = y;
        prev_b = b;
      }
    }
  }
}

TEST_CASE("midrange tightness for alpha=2") {
  auto p = build_params(2.0, Variant::lemma1);
  double max_err = 0.0;
  double center_err = 0.0;
  for (double b = p.c1; b <= std::min(p.c2, 6.0); b += 1e-3) {
    double e = std::fabs(approx_cdf(p, b) - (1.0 - mpa::marcum_q1(2.0, b)));
    max_err = std::max(max_err, e);
    if (std::fabs(b - p.x0) < 0.5 * (p.x0 - p.c1)) center_err = std::max(center_err, e);
  }
  // The worst midrange deviation sits at the upper breakpoint, where the
  // clipped line jumps to 1 while the CDF is still ~0.89.
  CHECK(max_err == Approx(1.0 - (1.0 - mpa::marcum_q1(2.0, p.c2))).margin(2e-3));
  CHECK(max_err < 0.12);
  // Near the tangent point the fit is an order of magnitude tighter.
  CHECK(center_err < 0.03);
}

TEST_CASE("o-form reproduces the lemma1 middle piece") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> ua(0.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    double a = ua(gen);
    auto p = build_params(a, Variant::lemma1);
    std::uniform_real_distribution<double> ub(p.c1, p.c2);
    double b = ub(gen);
    double line = p.slope_m * (b - p.x0) + p.y0;
    double oform = p.o1 * (b - p.o2) + p.o3;
    CHECK(oform == Approx(line).margin(1e-12));
  }
}

TEST_CASE("error report") {
  auto rows = mpa::semilinear::error_report({0.1, 0.5, 1.0}, 0.01);
  CHECK(rows.size() == 3 * 4 * 2);
  for (const auto& r : rows) {
    CHECK(r.max_abs_err >= r.mean_abs_err);
    CHECK(r.max_abs_err <= 1.0);
  }
  // Degenerate singleton grid; alpha=0 only supports lemma1/coro2.
  auto one = mpa::semilinear::error_report({0.0}, 0.05);
  CHECK(one.size() == 2 * 2);

  // Misusing the small-alpha variant at alpha=3 must cost midrange accuracy
  // relative to lemma1.
  auto full = mpa::semilinear::error_report({3.0}, 0.005);
  double lemma1_mid = -1.0, coro2_mid = -1.0;
  for (const auto& r : full) {
    if (r.region != "midrange") continue;
    if (r.variant == Variant::lemma1) lemma1_mid = r.max_abs_err;
    if (r.variant == Variant::coro2) coro2_mid = r.max_abs_err;
  }
  CHECK(lemma1_mid >= 0.0);
  CHECK(coro2_mid > lemma1_mid);
}

TEST_CASE("regime flags") {
  CHECK(build_params(0.5, Variant::coro1).outside_regime);
  CHECK(build_params(0.5, Variant::coro3).outside_regime);
  CHECK_FALSE(build_params(2.0, Variant::coro1).outside_regime);
  CHECK_THROWS_AS(build_params(0.0, Variant::coro1), std::domain_error);
  CHECK_THROWS_AS(build_params(0.0, Variant::coro3), std::domain_error);
}
