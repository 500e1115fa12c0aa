// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite.  Each criterion is evaluated exactly as
// stated (grids, tolerances and runtime budgets pinned in code) and reports
// one pass/fail line; failures carry the measured numbers.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mpa/channel.hpp"
#include "mpa/experiments.hpp"
#include "mpa/harq_power.hpp"
#include "mpa/integrals.hpp"
#include "mpa/marcum_approx.hpp"
#include "mpa/rate_adapt.hpp"
#include "mpa/special.hpp"

namespace mpa::acceptance {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

namespace detail {

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

inline std::string fmt(double v) { return mpa::csv::format(v); }

}  // namespace detail

// 1. Special-function identities.
inline CriterionResult criterion_identities() {
  detail::Timer timer;
  double worst_q = 0.0;
  for (double a : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    double rhs = 0.5 * (1.0 + mpa::bessel_i0_scaled(a * a));
    worst_q = std::max(worst_q, std::fabs(mpa::marcum_q1(a, a) - rhs));
  }
  double worst_w = 0.0;
  for (double x : {-1.0 / M_E + 1e-6, -0.2, 0.5, 1.0, 10.0, 1e3, 1e6}) {
    double w = mpa::lambert_w0(x);
    worst_w = std::max(worst_w, std::fabs(w * std::exp(w) - x) /
                                    std::max(std::fabs(x), 1e-300));
  }
  double worst_g = 0.0;
  for (double s : {0.5, 1.0, 2.5, 5.0}) {
    for (double x : {0.2, 1.0, 4.0, 12.0}) {
      double lhs = mpa::upper_incomplete_gamma(s + 1.0, x);
      double rhs = s * mpa::upper_incomplete_gamma(s, x) + std::pow(x, s) * std::exp(-x);
      worst_g = std::max(worst_g, std::fabs(lhs - rhs) / rhs);
    }
  }
  CriterionResult r{1, "special-function identities", true, 0.0, ""};
  r.seconds = timer.seconds();
  r.pass = worst_q < 1e-10 && worst_w < 1e-12 && worst_g < 1e-10 && r.seconds < 1.0;
  r.detail = "max |Q1(a,a)-identity| = " + detail::fmt(worst_q) +
             ", Lambert fixed-point rel = " + detail::fmt(worst_w) +
             ", gamma recurrence rel = " + detail::fmt(worst_g);
  return r;
}

// 2. Semi-linear CDF tightness on the standard alpha grid.
inline CriterionResult criterion_semilinear() {
  detail::Timer timer;
  double worst_tangency = 0.0, worst_mid = 0.0, worst_mid_alpha = 0.0;
  for (double a : {0.1, 0.5, 1.0, 2.0}) {
    auto p = mpa::semilinear::build_params(a, mpa::semilinear::Variant::lemma1);
    worst_tangency = std::max(
        worst_tangency,
        std::fabs(mpa::semilinear::approx_cdf(p, p.x0) - (1.0 - mpa::marcum_q1(a, p.x0))));
    for (double b = p.c1; b <= p.c2; b += 1e-3) {
      double err = std::fabs(mpa::semilinear::approx_cdf(p, b) -
                             (1.0 - mpa::marcum_q1(a, b)));
      if (err > worst_mid) {
        worst_mid = err;
        worst_mid_alpha = a;
      }
    }
  }
  CriterionResult r{2, "semi-linear CDF tightness", true, 0.0, ""};
  r.seconds = timer.seconds();
  r.pass = worst_tangency < 1e-10 && worst_mid < 0.06 && r.seconds < 5.0;
  r.detail = "tangency max = " + detail::fmt(worst_tangency) +
             ", midrange max abs err = " + detail::fmt(worst_mid) + " at alpha=" +
             detail::fmt(worst_mid_alpha) + " (bound 0.06)";
  return r;
}

// 3. Exponential-power integral closed form vs quadrature oracle.
inline CriterionResult criterion_g_integrals() {
  detail::Timer timer;
  const double mn[5][2] = {{4, 4}, {3, 3}, {2, 2}, {0, 1}, {1, 1}};
  int cells = 0, bad = 0;
  double worst = 0.0, worst_m = 0, worst_n = 0, worst_rho = 0;
  for (const auto& pair : mn) {
    for (double rho = 0.0; rho <= 3.0 + 1e-9; rho += 0.25) {
      mpa::integrals::GIntegralSpec s{2.0, rho, pair[0], pair[1]};
      double oracle = mpa::integrals::g_quadrature_oracle(s);
      if (std::fabs(oracle) <= 1e-3) continue;
      ++cells;
      double rel = std::fabs(mpa::integrals::g_closed_form(s) - oracle) /
                   std::fabs(oracle);
      if (rel > 0.05) ++bad;
      if (rel > worst) {
        worst = rel;
        worst_m = pair[0];
        worst_n = pair[1];
        worst_rho = rho;
      }
    }
  }
  CriterionResult r{3, "exp-power integral closed form vs oracle", true, 0.0, ""};
  r.seconds = timer.seconds();
  r.pass = bad == 0 && r.seconds < 30.0;
  r.detail = std::to_string(bad) + "/" + std::to_string(cells) +
             " cells over 5%; worst rel err " + detail::fmt(worst) + " at (m,n)=(" +
             detail::fmt(worst_m) + "," + detail::fmt(worst_n) + "), rho=" +
             detail::fmt(worst_rho);
  return r;
}

// 4. Log-weighted integral closed form (incl. m = 0 variant) vs oracle.
inline CriterionResult criterion_t_integrals() {
  detail::Timer timer;
  int cells = 0, bad = 0;
  double worst = 0.0, worst_alpha = 0, worst_m = 0, worst_a = 0;
  const double inf = std::numeric_limits<double>::infinity();
  for (double alpha : {1.0, 2.0}) {
    for (double a : {1.0, 2.0}) {
      for (double m : {0.0, 1.0, 2.0}) {
        mpa::integrals::TIntegralSpec s{alpha, m, a, 0.0,
                                        m == 0.0
                                            ? mpa::integrals::t_theta2_surrogate(alpha)
                                            : inf};
        double cf = m == 0.0 ? mpa::integrals::t_zero_m_closed_form(s)
                             : mpa::integrals::t_closed_form(s);
        double oracle = mpa::integrals::t_quadrature_oracle(s);
        if (std::fabs(oracle) <= 1e-3) continue;
        ++cells;
        double rel = std::fabs(cf - oracle) / std::fabs(oracle);
        if (rel > 0.05) ++bad;
        if (rel > worst) {
          worst = rel;
          worst_alpha = alpha;
          worst_m = m;
          worst_a = a;
        }
      }
    }
  }
  CriterionResult r{4, "log-weight integral closed form vs oracle", true, 0.0, ""};
  r.seconds = timer.seconds();
  r.pass = bad == 0 && r.seconds < 30.0;
  r.detail = std::to_string(bad) + "/" + std::to_string(cells) +
             " cells over 5%; worst rel err " + detail::fmt(worst) + " at alpha=" +
             detail::fmt(worst_alpha) + ", m=" + detail::fmt(worst_m) + ", a=" +
             detail::fmt(worst_a);
  return r;
}

// 5. Channel model: conditional KS per ghat bin, marginal mean.
inline CriterionResult criterion_channel(std::uint64_t seed) {
  detail::Timer timer;
  auto model = mpa::channel::make_model(1.5 * mpa::channel::speed_of_light / 2.68e9,
                                        114.0 / 3.6, 5e-3, 2.68e9, 1.0);
  double worst_ks = 0.0;
  for (double gh_target : {0.5, 1.0, 2.0}) {
    std::vector<double> cond;
    cond.reserve(100000);
    mpa::Rng rng = mpa::substream(seed, static_cast<std::uint64_t>(gh_target * 100));
    const double c1 = std::sqrt(1.0 - model.sigma * model.sigma);
    while (cond.size() < 100000) {
      auto hhat = rng.cgauss();
      double gh = std::norm(hhat);
      if (std::fabs(gh - gh_target) > 0.01 * gh_target) continue;
      auto h = c1 * hhat + model.sigma * rng.cgauss();
      cond.push_back(std::norm(h));
    }
    std::sort(cond.begin(), cond.end());
    auto dist = mpa::channel::ConditionalGainDist::make(gh_target, model.sigma);
    double ks = 0.0;
    for (std::size_t i = 0; i < cond.size(); ++i) {
      double F = dist.cdf(cond[i]);
      ks = std::max(ks, std::fabs(F - (i + 1.0) / cond.size()));
      ks = std::max(ks, std::fabs(F - static_cast<double>(i) / cond.size()));
    }
    worst_ks = std::max(worst_ks, ks);
  }
  auto pairs = mpa::channel::sample_pair(model, 1000000, seed + 7);
  double mean = 0.0;
  for (auto& p : pairs) mean += p.second;
  mean /= pairs.size();
  CriterionResult r{5, "channel conditional law and marginal", true, 0.0, ""};
  r.seconds = timer.seconds();
  r.pass = worst_ks < 0.01 && std::fabs(mean - 1.0) < 0.01 && r.seconds < 60.0;
  r.detail = "worst per-bin KS = " + detail::fmt(worst_ks) +
             " (bound 0.01), marginal mean = " + detail::fmt(mean);
  return r;
}

// 6. Lambert-W closed-form rate vs grid-search oracle.
inline CriterionResult criterion_rate_closed_form() {
  detail::Timer timer;
  int cells = 0, bad = 0;
  double worst = 1.0, worst_snr = 0, worst_gh = 0, worst_sg = 0;
  for (double snr = 0.0; snr <= 30.0 + 1e-9; snr += 3.0) {
    double P = mpa::experiments::db_to_linear(snr);
    for (double gh : {0.25, 1.0, 4.0}) {
      for (double sg : {0.1, 0.5, 0.9}) {
        auto dist = mpa::channel::ConditionalGainDist::make(gh, sg);
        double r_star = mpa::rate::optimal_rate_oracle(dist, P);
        double eta_star =
            mpa::rate::instantaneous_throughput(dist, {P, r_star, {}}).eta;
        if (eta_star <= 0.0) continue;
        double r_cf = mpa::rate::optimal_rate_closed_form(dist, P);
        double eta_cf = mpa::rate::instantaneous_throughput(dist, {P, r_cf, {}}).eta;
        ++cells;
        double ratio = eta_cf / eta_star;
        if (ratio < 0.98) ++bad;
        if (ratio < worst) {
          worst = ratio;
          worst_snr = snr;
          worst_gh = gh;
          worst_sg = sg;
        }
      }
    }
  }
  CriterionResult r{6, "closed-form rate vs grid oracle", true, 0.0, ""};
  r.seconds = timer.seconds();
  r.pass = bad == 0 && r.seconds < 60.0;
  r.detail = std::to_string(bad) + "/" + std::to_string(cells) +
             " cells under 98%; worst eta ratio " + detail::fmt(worst) + " at snr=" +
             detail::fmt(worst_snr) + " dB, ghat=" + detail::fmt(worst_gh) +
             ", sigma=" + detail::fmt(worst_sg);
  return r;
}

// 7. Baseline ordering over SNR.
inline CriterionResult criterion_ordering(std::uint64_t seed) {
  detail::Timer timer;
  auto model = mpa::channel::make_model(1.5 * mpa::channel::speed_of_light / 2.68e9,
                                        114.0 / 3.6, 5e-3, 2.68e9, 1.0);
  bool ordered = true;
  bool gap_positive = true;
  double worst_margin = 1e9;
  std::string violations;
  for (double snr = 0.0; snr <= 30.0 + 1e-9; snr += 3.0) {
    double P = mpa::experiments::db_to_linear(snr);
    using mpa::rate::PolicyKind;
    double no_csit =
        mpa::rate::expected_throughput(model, P, PolicyKind::no_csit, 1, seed).eta;
    double adaptive =
        mpa::rate::expected_throughput(model, P, PolicyKind::adaptive, 100000, seed).eta;
    double genie =
        mpa::rate::expected_throughput(model, P, PolicyKind::genie, 100000, seed).eta;
    if (!(no_csit <= adaptive && adaptive <= genie)) {
      ordered = false;
      violations += " [snr=" + detail::fmt(snr) + ": " + detail::fmt(no_csit) + "/" +
                    detail::fmt(adaptive) + "/" + detail::fmt(genie) + "]";
    }
    if (snr > 10.0 && adaptive - no_csit <= 0.0) gap_positive = false;
    worst_margin = std::min(worst_margin, adaptive - no_csit);
  }
  CriterionResult r{7, "baseline ordering NoCSIT <= Adaptive <= Genie", true, 0.0, ""};
  r.seconds = timer.seconds();
  r.pass = ordered && gap_positive && r.seconds < 120.0;
  r.detail = "min(adaptive - no_csit) = " + detail::fmt(worst_margin) +
             (violations.empty() ? "" : "; violations:" + violations);
  return r;
}

// 8. Optimal-speed existence and insensitivity to kappa.
inline CriterionResult criterion_speed_argmax(std::uint64_t seed) {
  detail::Timer timer;
  mpa::experiments::ExperimentConfig cfg;
  cfg.seed = seed;
  cfg.samples = 100000;
  const double d_a = cfg.d_a();
  const double delta = 5e-3;
  const double v_opt_kmh = d_a / delta * 3.6;  // exact alignment speed
  const double step = 2.0;
  for (double v = 100.0; v <= 140.0 + 1e-9; v += step) cfg.v_kmh.push_back(v);
  cfg.v_kmh.erase(cfg.v_kmh.begin());  // drop the default 114 entry
  cfg.delta_ms = {5.0};
  cfg.kappa = {1.0, 0.9, 0.66};
  auto rows = mpa::experiments::axis_sweep_rows(cfg, mpa::experiments::SweepAxis::speed,
                                                23.0);
  double argmax[3] = {0, 0, 0}, best[3] = {-1, -1, -1};
  for (const auto& row : rows) {
    int k = row.kappa == 1.0 ? 0 : row.kappa == 0.9 ? 1 : 2;
    if (row.eta > best[k]) {
      best[k] = row.eta;
      argmax[k] = row.v_kmh;
    }
  }
  CriterionResult r{8, "optimal speed at v = d_a/delta, kappa-insensitive", true, 0.0,
                    ""};
  r.seconds = timer.seconds();
  bool at_opt = std::fabs(argmax[0] - v_opt_kmh) <= step + 1e-9;
  bool insensitive = std::fabs(argmax[1] - argmax[0]) <= step + 1e-9 &&
                     std::fabs(argmax[2] - argmax[0]) <= step + 1e-9;
  r.pass = at_opt && insensitive && r.seconds < 180.0;
  r.detail = "argmax v = {" + detail::fmt(argmax[0]) + ", " + detail::fmt(argmax[1]) +
             ", " + detail::fmt(argmax[2]) + "} km/h for kappa {1, 0.9, 0.66}; " +
             "d_a/delta = " + detail::fmt(v_opt_kmh) + " km/h, step " +
             detail::fmt(step);
  return r;
}

// 9. HARQ calibration and power ordering.
inline CriterionResult criterion_harq(std::uint64_t seed) {
  detail::Timer timer;
  bool calibrated = true, inr_cheaper = true, eps_monotone = true, rate_monotone = true;
  double worst_ratio = 1.0;
  std::string notes;
  for (double sg : {0.3, 0.6}) {
    for (double R : {0.5, 1.0, 2.0}) {
      double loose_rtd = -1.0;  // Pbar at the larger epsilon, set first
      for (double eps : {1e-1, 1e-2}) {
        auto rtd = mpa::harq::optimize_p1(mpa::harq::Protocol::rtd, R, eps, sg,
                                          1000000, seed);
        auto inr = mpa::harq::optimize_p1(mpa::harq::Protocol::inr, R, eps, sg,
                                          1000000, seed + 1);
        for (const auto* res : {&rtd, &inr}) {
          double ratio = res->achieved_outage / eps;
          worst_ratio = std::max(worst_ratio, std::max(ratio, 1.0 / ratio));
          if (ratio < 0.5 || ratio > 2.0) {
            calibrated = false;
            notes += " [R=" + detail::fmt(R) + ",eps=" + detail::fmt(eps) +
                     ",sigma=" + detail::fmt(sg) + ": " + detail::fmt(ratio) + "x]";
          }
        }
        if (inr.expected_total > rtd.expected_total + 1e-9) inr_cheaper = false;
        // Tightening the target (smaller eps) must never get cheaper.
        if (loose_rtd >= 0.0 && rtd.expected_total < loose_rtd - 1e-9)
          eps_monotone = false;
        loose_rtd = rtd.expected_total;
      }
    }
    // Pbar strictly increasing in R at fixed eps.
    double prev = 0.0;
    for (double R : {0.5, 1.0, 2.0}) {
      double pb = mpa::harq::optimize_p1(mpa::harq::Protocol::rtd, R, 1e-2, sg, 1,
                                         seed).expected_total;
      if (pb <= prev) rate_monotone = false;
      prev = pb;
    }
  }
  CriterionResult r{9, "HARQ outage calibration and power ordering", true, 0.0, ""};
  r.seconds = timer.seconds();
  r.pass = calibrated && inr_cheaper && eps_monotone && rate_monotone &&
           r.seconds < 300.0;
  r.detail = "worst calibration factor " + detail::fmt(worst_ratio) +
             " (allowed 2), INR<=RTD " + (inr_cheaper ? "ok" : "VIOLATED") +
             ", monotone in eps " + (eps_monotone ? "ok" : "VIOLATED") +
             ", monotone in R " + (rate_monotone ? "ok" : "VIOLATED") + notes;
  return r;
}

// 10. Determinism: same seed twice gives byte-identical CSV bodies.
inline CriterionResult criterion_determinism(std::uint64_t seed) {
  detail::Timer timer;
  mpa::experiments::ExperimentConfig cfg;
  cfg.experiment = "rate-sweep";
  cfg.seed = seed;
  cfg.samples = 20000;
  cfg.snr_db = {0, 10, 20, 30};
  auto a = mpa::experiments::sweep_csv(mpa::experiments::rate_sweep_rows(cfg));
  auto b = mpa::experiments::sweep_csv(mpa::experiments::rate_sweep_rows(cfg));
  cfg.samples = 50000;
  cfg.rates = {1.0};
  cfg.sigma = {0.3};
  auto h1 = mpa::experiments::harq_csv(mpa::experiments::harq_sweep_rows(cfg));
  auto h2 = mpa::experiments::harq_csv(mpa::experiments::harq_sweep_rows(cfg));
  auto i1 = mpa::experiments::integral_check_csv();
  auto i2 = mpa::experiments::integral_check_csv();
  CriterionResult r{10, "seeded determinism of CSV artifacts", true, 0.0, ""};
  r.seconds = timer.seconds();
  r.pass = a == b && h1 == h2 && i1 == i2;
  r.detail = std::string("rate-sweep ") + (a == b ? "identical" : "DIFFERS") +
             ", harq-sweep " + (h1 == h2 ? "identical" : "DIFFERS") +
             ", integral-check " + (i1 == i2 ? "identical" : "DIFFERS");
  return r;
}

inline std::vector<CriterionResult> run_all(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  out.push_back(criterion_identities());
  out.push_back(criterion_semilinear());
  out.push_back(criterion_g_integrals());
  out.push_back(criterion_t_integrals());
  out.push_back(criterion_channel(seed));
  out.push_back(criterion_rate_closed_form());
  out.push_back(criterion_ordering(seed));
  out.push_back(criterion_speed_argmax(seed));
  out.push_back(criterion_harq(seed));
  out.push_back(criterion_determinism(seed));
  return out;
}

template <typename Stream>
int print_report(Stream& os, const std::vector<CriterionResult>& results) {
  int failed = 0;
  for (const auto& r : results) {
    os << "[" << (r.pass ? "PASS" : "FAIL") << "] " << r.index << ". " << r.name
       << " (" << mpa::csv::format(r.seconds) << " s): " << r.detail << "\n";
    if (!r.pass) ++failed;
  }
  os << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed;
}

inline std::string report_csv(const std::vector<CriterionResult>& results) {
  mpa::csv::Writer w({"criterion", "name", "pass", "seconds", "detail"});
  for (const auto& r : results)
    w.row({std::to_string(r.index), r.name, r.pass ? "1" : "0",
           mpa::csv::format(r.seconds), r.detail});
  return w.str();
}

}  // namespace mpa::acceptance
