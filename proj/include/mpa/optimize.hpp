// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <utility>

namespace mpa {

// Golden-section maximization of a unimodal function on [lo, hi].
template <typename F>
double golden_max(const F& f, double lo, double hi, double xtol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

template <typename F>
double golden_min(const F& f, double lo, double hi, double xtol) {
  return golden_max([&](double x) { return -f(x); }, lo, hi, xtol);
}

// Coarse grid scan followed by golden refinement around the best cell.
template <typename F>
double grid_then_golden_max(const F& f, double lo, double hi, double step,
                            double xtol) {
  double best_x = lo, best_f = f(lo);
  for (double x = lo + step; x <= hi; x += step) {
    double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  }
  double a = std::max(lo, best_x - step);
  double b = std::min(hi, best_x + step);
  return golden_max(f, a, b, xtol);
}

}  // namespace mpa
