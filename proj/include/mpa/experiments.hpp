// SPDX-License-Identifier: Apache-2.0
//
// Config-driven experiment runners.  Each experiment evaluates one result
// family on a parameter grid and renders a CSV (plus a .meta sidecar with
// the config hash, seed and library version).  All Monte Carlo work is
// seeded per grid point, so output bytes do not depend on the worker count.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "mpa/channel.hpp"
#include "mpa/config.hpp"
#include "mpa/csv.hpp"
#include "mpa/harq_power.hpp"
#include "mpa/integrals.hpp"
#include "mpa/marcum_approx.hpp"
#include "mpa/parallel.hpp"
#include "mpa/rate_adapt.hpp"
#include "mpa/version.hpp"

namespace mpa::experiments {

struct ExperimentConfig {
  std::string experiment;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t samples = 100000;

  // PA geometry defaults from the simulation setup: 2.68 GHz, 1.5 lambda.
  double f_c = 2.68e9;
  double d_a_wavelengths = 1.5;

  std::vector<double> snr_db = {0, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30};
  std::vector<double> v_kmh = {114.0};
  std::vector<double> delta_ms = {5.0};
  std::vector<double> kappa = {1.0};
  std::vector<double> alpha = {0.1, 0.5, 1.0, 2.0};
  std::vector<double> epsilon = {1e-1, 1e-2};
  std::vector<double> rates = {0.5, 1.0, 2.0};
  std::vector<double> sigma;  // empty: derive from geometry
  double beta_resolution = 0.01;
  mpa::semilinear::Variant variant = mpa::semilinear::Variant::lemma1;
  std::vector<mpa::harq::Protocol> protocols = {mpa::harq::Protocol::rtd,
                                                mpa::harq::Protocol::inr};

  // Final key=value view of everything above, used for the metadata hash.
  std::map<std::string, std::string> canonical;

  double d_a() const { return d_a_wavelengths * mpa::channel::speed_of_light / f_c; }

  mpa::channel::MismatchModel model(double v_kmh_val, double delta_ms_val,
                                    double kappa_val) const {
    return mpa::channel::make_model(d_a(), v_kmh_val / 3.6, delta_ms_val * 1e-3,
                                    f_c, kappa_val);
  }
};

inline double db_to_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

// ---- table builders (pure; used by the CLI and tests) ----

inline std::string approx_curves_csv(const std::vector<double>& alphas,
                                     double beta_resolution) {
  using namespace mpa::semilinear;
  mpa::csv::Writer w({"alpha", "variant", "beta", "approx_cdf", "exact_cdf"});
  for (double a : alphas) {
    for (Variant v : {Variant::lemma1, Variant::coro1, Variant::coro2, Variant::coro3}) {
      if (a == 0.0 && (v == Variant::coro1 || v == Variant::coro3)) continue;
      auto p = build_params(a, v);
      double bmax = p.c2 + std::max(1.0, 0.5 * (p.c2 - p.c1));
      for (double b = 0.0; b <= bmax; b += beta_resolution)
        w.row({mpa::csv::format(a), to_string(v), mpa::csv::format(b),
               mpa::csv::format(approx_cdf(p, b)),
               mpa::csv::format(1.0 - mpa::marcum_q1(a, b))});
    }
  }
  return w.str();
}

inline std::string approx_errors_csv(const std::vector<double>& alphas,
                                     double beta_resolution) {
  mpa::csv::Writer w({"alpha", "variant", "region", "max_abs_err", "mean_abs_err"});
  for (const auto& r : mpa::semilinear::error_report(alphas, beta_resolution))
    w.row({mpa::csv::format(r.alpha), to_string(r.variant), r.region,
           mpa::csv::format(r.max_abs_err), mpa::csv::format(r.mean_abs_err)});
  return w.str();
}

// Both integral families on the reproduction grids.
inline std::vector<mpa::integrals::ComparisonRow> integral_comparison_rows() {
  using namespace mpa::integrals;
  std::vector<ComparisonRow> rows;
  const double mn[5][2] = {{4, 4}, {3, 3}, {2, 2}, {0, 1}, {1, 1}};
  for (const auto& pair : mn) {
    for (double rho = 0.0; rho <= 3.0 + 1e-9; rho += 0.25) {
      GIntegralSpec s{2.0, rho, pair[0], pair[1]};
      double cf = g_closed_form(s);
      double oracle = g_quadrature_oracle(s);
      rows.push_back({'g', s.alpha, s.m, s.n, s.rho, 0.0, cf, oracle,
                      comparison_rel_err(cf, oracle)});
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (double alpha : {1.0, 2.0}) {
    for (double a : {1.0, 2.0}) {
      for (double m : {1.0, 2.0}) {
        TIntegralSpec s{alpha, m, a, 0.0, inf};
        double cf = t_closed_form(s);
        double oracle = t_quadrature_oracle(s);
        rows.push_back({'t', alpha, m, a, 0.0, inf, cf, oracle,
                        comparison_rel_err(cf, oracle)});
      }
      TIntegralSpec s0{alpha, 0.0, a, 0.0, t_theta2_surrogate(alpha)};
      double cf = t_zero_m_closed_form(s0);
      double oracle = t_quadrature_oracle(s0);
      rows.push_back({'t', alpha, 0.0, a, 0.0, s0.theta2, cf, oracle,
                      comparison_rel_err(cf, oracle)});
    }
  }
  return rows;
}

inline std::string integral_check_csv() {
  mpa::csv::Writer w({"family", "alpha", "m", "n_or_a", "rho_or_theta1",
                      "theta2", "closed_form", "oracle", "rel_err"});
  for (const auto& r : integral_comparison_rows())
    w.row({std::string(1, r.family), mpa::csv::format(r.alpha),
           mpa::csv::format(r.m), mpa::csv::format(r.n_or_a),
           mpa::csv::format(r.rho_or_theta1), mpa::csv::format(r.theta2),
           mpa::csv::format(r.closed_form), mpa::csv::format(r.oracle),
           mpa::csv::format(r.rel_err)});
  return w.str();
}

struct SweepRow {
  double snr_db;
  std::string kind;
  double kappa;
  double v_kmh;
  double delta_ms;
  double eta;
  double outage;
};

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  mpa::csv::Writer w({"snr_db", "kind", "kappa", "v_kmh", "delta_ms",
                      "eta_npcu", "outage"});
  for (const auto& r : rows)
    w.row({mpa::csv::format(r.snr_db), r.kind, mpa::csv::format(r.kappa),
           mpa::csv::format(r.v_kmh), mpa::csv::format(r.delta_ms),
           mpa::csv::format(r.eta), mpa::csv::format(r.outage)});
  return w.str();
}

// SNR sweep with adaptive / genie / no-CSIT columns as rows.
inline std::vector<SweepRow> rate_sweep_rows(const ExperimentConfig& cfg) {
  using mpa::rate::PolicyKind;
  double v = cfg.v_kmh.at(0), dm = cfg.delta_ms.at(0), kp = cfg.kappa.at(0);
  auto model = cfg.model(v, dm, kp);
  std::vector<SweepRow> rows(cfg.snr_db.size() * 3);
  mpa::parallel_for(cfg.snr_db.size(), [&](std::size_t i) {
    double P = db_to_linear(cfg.snr_db[i]);
    const PolicyKind kinds[3] = {PolicyKind::no_csit, PolicyKind::adaptive,
                                 PolicyKind::genie};
    for (int k = 0; k < 3; ++k) {
      auto r = mpa::rate::expected_throughput(model, P, kinds[k], cfg.samples,
                                              cfg.seed + i, cfg.variant);
      rows[3 * i + k] = {cfg.snr_db[i], mpa::rate::to_string(kinds[k]), kp, v,
                         dm, r.eta, r.outage};
    }
  });
  return rows;
}

// eta vs speed (or delay, or kappa) at fixed SNR; common seeds across the
// grid keep the argmax stable under Monte Carlo noise.
enum class SweepAxis { speed, delay, kappa };

inline std::vector<SweepRow> axis_sweep_rows(const ExperimentConfig& cfg,
                                             SweepAxis axis, double snr_db_val) {
  const std::vector<double>& vs = axis == SweepAxis::speed ? cfg.v_kmh
                                  : axis == SweepAxis::delay ? cfg.delta_ms
                                                             : cfg.kappa;
  const std::vector<double> kappas =
      axis == SweepAxis::kappa ? std::vector<double>{1.0} : cfg.kappa;
  double P = db_to_linear(snr_db_val);
  std::vector<SweepRow> rows(vs.size() * kappas.size());
  mpa::parallel_for(rows.size(), [&](std::size_t idx) {
    std::size_t i = idx / kappas.size();
    std::size_t j = idx % kappas.size();
    double v = axis == SweepAxis::speed ? vs[i] : cfg.v_kmh.at(0);
    double dm = axis == SweepAxis::delay ? vs[i] : cfg.delta_ms.at(0);
    double kp = axis == SweepAxis::kappa ? vs[i] : kappas[j];
    auto model = cfg.model(v, dm, kp);
    auto r = mpa::rate::expected_throughput(model, P, mpa::rate::PolicyKind::adaptive,
                                            cfg.samples, cfg.seed, cfg.variant);
    rows[idx] = {snr_db_val, "adaptive", kp, v, dm, r.eta, r.outage};
  });
  return rows;
}

struct HarqRow {
  mpa::harq::Protocol protocol;
  double rate;
  double epsilon;
  double sigma;
  double P1;
  double p_bar;
  double achieved_outage;
};

inline std::vector<HarqRow> harq_sweep_rows(const ExperimentConfig& cfg) {
  std::vector<double> sigmas = cfg.sigma;
  if (sigmas.empty())
    sigmas = {cfg.model(cfg.v_kmh.at(0), cfg.delta_ms.at(0), cfg.kappa.at(0)).sigma};
  std::vector<HarqRow> rows;
  for (auto proto : cfg.protocols)
    for (double R : cfg.rates)
      for (double eps : cfg.epsilon)
        for (double sg : sigmas) rows.push_back({proto, R, eps, sg, 0, 0, 0});
  mpa::parallel_for(rows.size(), [&](std::size_t i) {
    auto& r = rows[i];
    auto res = mpa::harq::optimize_p1(r.protocol, r.rate, r.epsilon, r.sigma,
                                      cfg.samples, cfg.seed + i);
    r.P1 = res.P1;
    r.p_bar = res.expected_total;
    r.achieved_outage = res.achieved_outage;
  });
  return rows;
}

inline std::string harq_csv(const std::vector<HarqRow>& rows) {
  mpa::csv::Writer w({"protocol", "R_npcu", "epsilon", "sigma", "P1", "P_bar",
                      "achieved_outage"});
  for (const auto& r : rows)
    w.row({mpa::harq::to_string(r.protocol), mpa::csv::format(r.rate),
           mpa::csv::format(r.epsilon), mpa::csv::format(r.sigma),
           mpa::csv::format(r.P1), mpa::csv::format(r.p_bar),
           mpa::csv::format(r.achieved_outage)});
  return w.str();
}

// Raw (g_hat, g) sample dump for the channel chain.
inline std::string sample_pairs_csv(const mpa::channel::MismatchModel& model,
                                    std::size_t count, std::uint64_t seed) {
  mpa::csv::Writer w({"g_hat", "g"});
  for (const auto& p : mpa::channel::sample_pair(model, count, seed))
    w.row({mpa::csv::format(p.first), mpa::csv::format(p.second)});
  return w.str();
}

// ---- file emission ----

inline void write_with_meta(const ExperimentConfig& cfg, const std::string& name,
                            const std::string& body) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  fs::path csv_path = fs::path(cfg.out_dir) / (name + ".csv");
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + csv_path.string());
    out << body;
  }
  std::ofstream meta(fs::path(cfg.out_dir) / (name + ".meta"), std::ios::binary);
  meta << "experiment=" << cfg.experiment << "\n"
       << "config_hash=" << mpa::config::hash({{cfg.experiment, cfg.canonical}})
       << "\n"
       << "seed=" << cfg.seed << "\n"
       << "version=" << mpa::version_string << "\n";
}

}  // namespace mpa::experiments
