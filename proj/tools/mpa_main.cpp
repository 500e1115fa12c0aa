// SPDX-License-Identifier: Apache-2.0
//
// Experiment runner: reproduces the figure families as CSV artifacts and
// runs the acceptance suite.  Exit codes: 0 ok, 1 config error, 2 numerical
// failure, 3 acceptance criterion failure.
#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mpa/acceptance.hpp"
#include "mpa/config.hpp"
#include "mpa/experiments.hpp"
#include "mpa/version.hpp"

namespace {

using mpa::experiments::ExperimentConfig;

const std::set<std::string> kExperiments = {
    "approx-curves", "integral-check", "rate-sweep",  "speed-sweep",
    "delay-sweep",   "kappa-sweep",    "harq-sweep",  "acceptance"};

// Per-experiment sweep defaults (overridden by config file, then flags).
void apply_experiment_defaults(ExperimentConfig& cfg) {
  if (cfg.experiment == "speed-sweep") {
    cfg.snr_db = {23.0};
    cfg.v_kmh = mpa::config::parse_range("100:140:2");
  } else if (cfg.experiment == "delay-sweep") {
    cfg.snr_db = {23.0};
    cfg.v_kmh = {120.0};
    cfg.delta_ms = mpa::config::parse_range("3:7:0.25");
  } else if (cfg.experiment == "kappa-sweep") {
    cfg.snr_db = {10.0, 19.0, 25.0};
    cfg.v_kmh = {114.5};
    cfg.kappa = mpa::config::parse_range("0.3:1:0.05");
  }
}

mpa::semilinear::Variant parse_variant(const std::string& s) {
  using mpa::semilinear::Variant;
  if (s == "lemma1") return Variant::lemma1;
  if (s == "coro1") return Variant::coro1;
  if (s == "coro2") return Variant::coro2;
  if (s == "coro3") return Variant::coro3;
  throw std::runtime_error("unknown variant '" + s + "'");
}

void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value) {
  using mpa::config::parse_list;
  using mpa::config::parse_range;
  using mpa::config::to_double;
  if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
    cfg.seed_set = true;
  } else if (key == "samples") {
    cfg.samples = static_cast<std::size_t>(std::stoull(value));
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "snr_db") {
    cfg.snr_db = parse_range(value);
  } else if (key == "v_kmh") {
    cfg.v_kmh = parse_range(value);
  } else if (key == "delta_ms") {
    cfg.delta_ms = parse_range(value);
  } else if (key == "kappa") {
    cfg.kappa = parse_list(value);
  } else if (key == "alpha") {
    cfg.alpha = parse_list(value);
  } else if (key == "epsilon") {
    cfg.epsilon = parse_list(value);
  } else if (key == "rates") {
    cfg.rates = parse_list(value);
  } else if (key == "sigma") {
    cfg.sigma = parse_list(value);
  } else if (key == "f_c_ghz") {
    cfg.f_c = to_double(value) * 1e9;
  } else if (key == "d_a_wavelengths") {
    cfg.d_a_wavelengths = to_double(value);
  } else if (key == "beta_resolution") {
    cfg.beta_resolution = to_double(value);
  } else if (key == "variant") {
    cfg.variant = parse_variant(value);
  } else if (key == "protocol") {
    if (value == "rtd")
      cfg.protocols = {mpa::harq::Protocol::rtd};
    else if (value == "inr")
      cfg.protocols = {mpa::harq::Protocol::inr};
    else
      throw std::runtime_error("unknown protocol '" + value + "'");
  } else {
    throw std::runtime_error("unknown config key '" + key + "'");
  }
  cfg.canonical[key] = value;
}

bool needs_seed(const std::string& experiment) {
  return experiment != "approx-curves" && experiment != "integral-check";
}

int run(ExperimentConfig& cfg) {
  using namespace mpa::experiments;
  if (cfg.experiment == "approx-curves") {
    write_with_meta(cfg, "approx_curves",
                    approx_curves_csv(cfg.alpha, cfg.beta_resolution));
    write_with_meta(cfg, "approx_errors",
                    approx_errors_csv(cfg.alpha, cfg.beta_resolution));
  } else if (cfg.experiment == "integral-check") {
    write_with_meta(cfg, "integral_check", integral_check_csv());
  } else if (cfg.experiment == "rate-sweep") {
    write_with_meta(cfg, "rate_sweep", sweep_csv(rate_sweep_rows(cfg)));
  } else if (cfg.experiment == "speed-sweep" || cfg.experiment == "delay-sweep" ||
             cfg.experiment == "kappa-sweep") {
    SweepAxis axis = cfg.experiment == "speed-sweep" ? SweepAxis::speed
                     : cfg.experiment == "delay-sweep" ? SweepAxis::delay
                                                       : SweepAxis::kappa;
    std::vector<SweepRow> rows;
    for (double snr : cfg.snr_db) {
      auto part = axis_sweep_rows(cfg, axis, snr);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    std::string name = cfg.experiment;
    for (auto& c : name)
      if (c == '-') c = '_';
    write_with_meta(cfg, name, sweep_csv(rows));
  } else if (cfg.experiment == "harq-sweep") {
    write_with_meta(cfg, "harq_sweep", harq_csv(harq_sweep_rows(cfg)));
  } else if (cfg.experiment == "acceptance") {
    auto results = mpa::acceptance::run_all(cfg.seed);
    int failed = mpa::acceptance::print_report(std::cout, results);
    write_with_meta(cfg, "acceptance", mpa::acceptance::report_csv(results));
    if (failed > 0) return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marcum-Q semi-linear approximation and predictor-antenna "
               "link-adaptation experiments"};
  app.set_version_flag("--version", std::string("mpa ") + mpa::version_string);
  app.footer(
      "Output columns (see docs/csv-schema.md for details):\n"
      "  approx_curves:  alpha,variant,beta,approx_cdf,exact_cdf\n"
      "  approx_errors:  alpha,variant,region,max_abs_err,mean_abs_err\n"
      "  integral_check: family,alpha,m,n_or_a,rho_or_theta1,theta2,"
      "closed_form,oracle,rel_err\n"
      "  *_sweep:        snr_db,kind,kappa,v_kmh,delta_ms,eta_npcu,outage\n"
      "  harq_sweep:     protocol,R_npcu,epsilon,sigma,P1,P_bar,achieved_outage\n"
      "  acceptance:     criterion,name,pass,seconds,detail\n"
      "Each CSV gets a .meta sidecar (config hash, seed, version).\n"
      "MPA_THREADS caps the worker pool; results do not depend on it.");

  std::string experiment, config_path, out_dir, variant, protocol;
  std::string snr_db, v_kmh, delta_ms, kappa, epsilon, alpha, rates, sigma;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t samples = 0;

  app.add_option("--experiment", experiment,
                 "one of: approx-curves, integral-check, rate-sweep, "
                 "speed-sweep, delay-sweep, kappa-sweep, harq-sweep, acceptance");
  app.add_option("--config", config_path, "config file (key = value sections)");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (required for Monte Carlo runs)");
  app.add_option("--samples", samples, "Monte Carlo realizations per grid point");
  app.add_option("--out", out_dir, "output directory for CSV artifacts");
  app.add_option("--snr-db", snr_db, "SNR grid A:B:STEP in dB");
  app.add_option("--v-kmh", v_kmh, "speed grid A:B:STEP in km/h");
  app.add_option("--delta-ms", delta_ms, "processing delay grid A:B:STEP in ms");
  app.add_option("--kappa", kappa, "estimation correlation list, e.g. 1,0.9,0.66");
  app.add_option("--alpha", alpha, "alpha list for approx-curves");
  app.add_option("--epsilon", epsilon, "target outage list for harq-sweep");
  app.add_option("--rates", rates, "rate list (npcu) for harq-sweep");
  app.add_option("--sigma", sigma, "mismatch coefficient list (overrides geometry)");
  app.add_option("--variant", variant, "semi-linear variant: lemma1|coro1|coro2|coro3");
  app.add_option("--protocol", protocol, "HARQ protocol: rtd|inr");

  CLI11_PARSE(app, argc, argv);
  seed_given = seed_opt->count() > 0;

  try {
    ExperimentConfig cfg;

    // Config file first (section for the chosen experiment), flags override.
    mpa::config::Sections sections;
    if (!config_path.empty()) sections = mpa::config::parse_file(config_path);
    if (experiment.empty() && !sections.empty()) {
      // A config with exactly one non-empty section selects the experiment.
      for (const auto& [name, kv] : sections)
        if (!name.empty() && kExperiments.count(name)) {
          if (!experiment.empty()) {
            std::cerr << "config names several experiments; pass --experiment\n";
            return 1;
          }
          experiment = name;
        }
    }
    if (experiment.empty() || !kExperiments.count(experiment)) {
      std::cerr << "no valid experiment selected (use --experiment)\n";
      return 1;
    }
    cfg.experiment = experiment;
    cfg.canonical["experiment"] = experiment;
    apply_experiment_defaults(cfg);

    if (auto it = sections.find(""); it != sections.end())
      for (const auto& [k, v] : it->second) apply_key(cfg, k, v);
    if (auto it = sections.find(experiment); it != sections.end())
      for (const auto& [k, v] : it->second) apply_key(cfg, k, v);

    if (seed_given) apply_key(cfg, "seed", std::to_string(seed));
    if (samples) apply_key(cfg, "samples", std::to_string(samples));
    if (!out_dir.empty()) apply_key(cfg, "out", out_dir);
    if (!snr_db.empty()) apply_key(cfg, "snr_db", snr_db);
    if (!v_kmh.empty()) apply_key(cfg, "v_kmh", v_kmh);
    if (!delta_ms.empty()) apply_key(cfg, "delta_ms", delta_ms);
    if (!kappa.empty()) apply_key(cfg, "kappa", kappa);
    if (!alpha.empty()) apply_key(cfg, "alpha", alpha);
    if (!epsilon.empty()) apply_key(cfg, "epsilon", epsilon);
    if (!rates.empty()) apply_key(cfg, "rates", rates);
    if (!sigma.empty()) apply_key(cfg, "sigma", sigma);
    if (!variant.empty()) apply_key(cfg, "variant", variant);
    if (!protocol.empty()) apply_key(cfg, "protocol", protocol);

    if (needs_seed(cfg.experiment) && !cfg.seed_set) {
      std::cerr << "experiment '" << cfg.experiment
                << "' is Monte Carlo based; --seed is required\n";
      return 1;
    }
    if (cfg.samples < 1) {
      std::cerr << "samples must be >= 1\n";
      return 1;
    }

    return run(cfg);
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    // Config shape problems exit 1; numerical/accuracy problems exit 2.
    if (msg.rfind("config", 0) == 0 || msg.find("unknown") != std::string::npos) {
      std::cerr << "config error: " << msg << "\n";
      return 1;
    }
    std::cerr << "numerical error: " << msg << "\n";
    return 2;
  }
}
