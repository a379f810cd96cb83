// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Experiment runner behind the CLI.  Every experiment writes its data CSV, a
// JSON summary, and an SVG chart into the output directory; identical config
// and seed produce byte-identical CSVs.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fracwave/config.hpp"
#include "fracwave/csv.hpp"
#include "fracwave/decay_fit.hpp"
#include "fracwave/evolution.hpp"
#include "fracwave/svg.hpp"
#include "fracwave/sweeps.hpp"

namespace fracwave {

namespace runner_detail {

inline void write_report(const std::filesystem::path& dir, json report, const RunConfig& cfg) {
  report["config"] = cfg.to_json();
  report["config_hash"] = config_hash(cfg);
  std::ofstream os(dir / "report.json", std::ios::binary);
  if (!os) throw config_error("cannot open for writing: " + (dir / "report.json").string());
  os << report.dump(2) << "\n";
}

inline json envelope_json(const EnvelopeFit& env) {
  return {{"c", env.c},
          {"C", env.C},
          {"max_above", env.max_above},
          {"constant_floor", env.constant_floor}};
}

inline json cert_json(const ThickCertificate& cert) {
  return {{"eps", cert.eps},
          {"cube_len", cert.cube_len},
          {"rho", cert.rho},
          {"thick", cert.thick},
          {"boundary_slack", cert.boundary_slack}};
}

inline StateVector make_initial_data(const RunConfig& cfg, GridPtr grid) {
  const DataSpec& d = cfg.experiment.data;
  Rng rng(cfg.seed);
  StateVector U = [&]() -> StateVector {
    if (d.kind == "broadband") return make_broadband(grid, cfg.s, rng, d.band_frac);
    if (d.kind == "wave-packet")
      return make_wave_packet(grid, cfg.s, d.center, d.carrier, d.width);
    if (d.mode_index >= grid->size() || grid->is_nyquist(d.mode_index))
      throw config_error("config: 'experiment.data.index' out of range or Nyquist");
    return make_single_mode(grid, cfg.s, d.mode_index, cd(1.0, 0.0), cd(0.0, 0.0));
  }();
  if (cfg.experiment.smooth_k > 0) {
    U = smooth_data(U, cfg.experiment.smooth_k);
    const double e = energy_norm(U);
    U = StateVector(U.u1.scaled(1.0 / e), U.u2.scaled(1.0 / e), cfg.s);
  }
  return U;
}

inline json decay_report_json(const DecayReport& rep, double s) {
  json j{{"model", model_name(rep.model)},
         {"rate", rep.rate},
         {"amplitude", rep.amplitude},
         {"window", {rep.window_lo, rep.window_hi}},
         {"rms_residual", rep.rms_residual},
         {"model_selection_margin", rep.model_selection_margin},
         {"ambiguous", rep.ambiguous},
         {"rms_all",
          {{"exponential", rep.rms_all[0]},
           {"polynomial", rep.rms_all[1]},
           {"logarithmic", rep.rms_all[2]}}}};
  if (s < 2.0) {
    // candidate identifications of a fitted polynomial exponent: the
    // semigroup statement is for the smoothed norm, the energy is its square
    j["polynomial_rate_candidates"] = {{"semigroup", s / (4.0 - 2.0 * s)},
                                       {"energy", 2.0 * s / (4.0 - 2.0 * s)}};
  }
  return j;
}

inline void run_simulate(const RunConfig& cfg, const std::filesystem::path& dir, int threads) {
  (void)threads;  // a single simulation is sequential in time
  GridPtr grid = cfg.grid.make();
  DampingProfile gamma = cfg.damping.make(grid);
  StateVector U0 = make_initial_data(cfg, grid);
  EnergyTrace tr =
      simulate(U0, gamma, cfg.experiment.T, cfg.experiment.dt, cfg.experiment.dt_out);

  std::vector<std::vector<double>> rows;
  rows.reserve(tr.times.size());
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    rows.push_back({tr.times[i], tr.energies[i]});
  write_csv((dir / "trace.csv").string(), {"t", "energy"}, rows);

  const double lo = cfg.experiment.window ? (*cfg.experiment.window)[0] : 0.2 * cfg.experiment.T;
  const double hi = cfg.experiment.window ? (*cfg.experiment.window)[1] : cfg.experiment.T;
  const DecayReport rep = fit_decay(tr, lo, hi);

  json report{{"experiment", "simulate"},
              {"decay", decay_report_json(rep, cfg.s)},
              {"energy_initial", tr.energies.front()},
              {"energy_final", tr.energies.back()},
              {"dt_effective", tr.meta.dt},
              {"steps_per_output", tr.meta.steps_per_output}};
  write_report(dir, report, cfg);

  ChartSpec chart;
  chart.title = "energy trace (" + std::string(family_name(gamma.family)) + ")";
  chart.xlabel = "t";
  chart.ylabel = "E(t)";
  chart.log_y = true;
  chart.series.push_back({"measured", tr.times, tr.energies});
  std::vector<double> fit_y;
  for (double t : tr.times) fit_y.push_back(model_value(rep.model, rep.amplitude, rep.rate, t));
  chart.series.push_back({std::string("fit: ") + model_name(rep.model), tr.times, fit_y});
  write_svg_chart((dir / "chart.svg").string(), chart);
}

inline void run_resolvent_sweep(const RunConfig& cfg, const std::filesystem::path& dir,
                                int threads) {
  if (!(cfg.s >= 2.0)) throw config_error("config: resolvent-sweep requires s >= 2");
  GridPtr grid = cfg.grid.make();
  DampingProfile gamma = cfg.damping.make(grid);
  const ExperimentSpec& e = cfg.experiment;

  auto lams = linspace(e.lambda_min, e.lambda_max, e.points);
  ResolventSweep sweep =
      run_resolvent_sweep(grid, &gamma, cfg.s, lams, e.tol, threads, cfg.seed, e.refine);

  const ThickCertificate cert = thickness(gamma, e.eps, e.cube_len);
  json prediction{{"available", false}};
  std::vector<double> pred(sweep.rows.size(), 0.0);
  if (cert.thick) {
    const double lmax = std::max(std::abs(e.lambda_min), std::abs(e.lambda_max));
    auto omega = gamma.level_set(e.eps);
    QuadFormSweep qs = run_quadform_sweep(grid, omega, cfg.s / 2.0, linspace(0.0, lmax, 17),
                                          1e-8, threads, cfg.seed);
    std::vector<double> row_lams, row_sigs;
    for (const auto& r : sweep.rows) {
      row_lams.push_back(r.lam);
      row_sigs.push_back(r.sigma);
    }
    AbsorbEstimate est = absorb_damping_estimate(gamma, e.eps, cert, qs.envelope.c,
                                                 qs.envelope.C, row_lams, row_sigs);
    pred = est.predicted_sigma;
    prediction = {{"available", true},
                  {"c0", est.c0},
                  {"C0", est.C0},
                  {"c_pred", est.c_pred},
                  {"C_pred", est.C_pred},
                  {"violations", est.violations},
                  {"observability_envelope", envelope_json(qs.envelope)}};
  }

  std::vector<std::vector<double>> rows;
  long total_matvecs = 0;
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& r = sweep.rows[i];
    rows.push_back({r.lam, r.sigma, r.residual, pred[i]});
    total_matvecs += r.matvecs;
  }
  write_csv((dir / "sweep.csv").string(),
            {"lambda", "sigma_min", "residual", "predicted_envelope"}, rows);

  json report{{"experiment", "resolvent-sweep"},
              {"envelope", envelope_json(sweep.envelope)},
              {"prediction", prediction},
              {"thickness", cert_json(cert)},
              {"eps", e.eps},
              {"total_matvecs", total_matvecs},
              {"points", sweep.rows.size()}};
  write_report(dir, report, cfg);

  ChartSpec chart;
  chart.title = "resolvent sigma_min along the imaginary axis";
  chart.xlabel = "lambda";
  chart.ylabel = "sigma_min";
  chart.log_y = true;
  std::vector<double> xs, ys;
  for (const auto& r : sweep.rows) {
    xs.push_back(r.lam);
    ys.push_back(r.sigma);
  }
  chart.series.push_back({"measured", xs, ys});
  if (cert.thick) chart.series.push_back({"predicted lower bound", xs, pred});
  write_svg_chart((dir / "chart.svg").string(), chart);
}

inline void run_spectral_constant(const RunConfig& cfg, const std::filesystem::path& dir,
                                  int threads) {
  GridPtr grid = cfg.grid.make();
  DampingProfile gamma = cfg.damping.make(grid);
  auto omega = gamma.level_set(cfg.experiment.eps);
  SpectralConstantCurve curve = run_spectral_constant_sweep(
      grid, omega, cfg.experiment.radii, cfg.experiment.tol, threads, cfg.seed);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < curve.radii.size(); ++i)
    rows.push_back({curve.radii[i], curve.constants[i].constant,
                    static_cast<double>(curve.constants[i].iterations)});
  write_csv((dir / "sweep.csv").string(), {"R", "constant", "iterations"}, rows);

  json report{{"experiment", "spectral-constant"},
              {"log_fit",
               {{"slope", curve.log_fit.slope},
                {"intercept", curve.log_fit.intercept},
                {"rms_residual", curve.log_fit.rms_residual}}},
              {"eps", cfg.experiment.eps},
              {"measure_fraction", mask_measure_fraction(*grid, omega)}};
  write_report(dir, report, cfg);

  ChartSpec chart;
  chart.title = "band-limited restriction constant";
  chart.xlabel = "R";
  chart.ylabel = "C(Omega, R)";
  chart.log_y = true;
  std::vector<double> ys;
  for (const auto& c : curve.constants) ys.push_back(c.constant);
  chart.series.push_back({"measured", curve.radii, ys});
  write_svg_chart((dir / "chart.svg").string(), chart);
}

inline void run_uncertainty_sweep(const RunConfig& cfg, const std::filesystem::path& dir,
                                  int threads) {
  GridPtr grid = cfg.grid.make();
  DampingProfile gamma = cfg.damping.make(grid);
  auto omega = gamma.level_set(cfg.experiment.eps);
  const double order = cfg.experiment.order > 0.0 ? cfg.experiment.order : cfg.s;
  auto lams =
      linspace(cfg.experiment.lambda_min, cfg.experiment.lambda_max, cfg.experiment.points);
  for (double l : lams)
    if (l < 0.0) throw config_error("config: uncertainty-sweep lambdas must be >= 0");
  QuadFormSweep sweep =
      run_quadform_sweep(grid, omega, order, lams, cfg.experiment.tol, threads, cfg.seed);

  std::vector<std::vector<double>> rows;
  for (const auto& r : sweep.rows) rows.push_back({r.lam, r.mu_min, r.residual});
  write_csv((dir / "sweep.csv").string(), {"lambda", "mu_min", "residual"}, rows);

  json report{{"experiment", "uncertainty-sweep"},
              {"envelope", envelope_json(sweep.envelope)},
              {"order", order},
              {"eps", cfg.experiment.eps},
              {"measure_fraction", mask_measure_fraction(*grid, omega)}};
  write_report(dir, report, cfg);

  ChartSpec chart;
  chart.title = "observability quadratic form, smallest eigenvalue";
  chart.xlabel = "lambda";
  chart.ylabel = "mu_min";
  chart.log_y = true;
  std::vector<double> xs, ys, env;
  for (const auto& r : sweep.rows) {
    xs.push_back(r.lam);
    ys.push_back(r.mu_min);
    env.push_back(sweep.envelope.c * std::exp(-sweep.envelope.C * r.lam));
  }
  chart.series.push_back({"mu_min", xs, ys});
  chart.series.push_back({"envelope", xs, env});
  write_svg_chart((dir / "chart.svg").string(), chart);
}

inline void run_thickness(const RunConfig& cfg, const std::filesystem::path& dir, int threads) {
  (void)threads;
  GridPtr grid = cfg.grid.make();
  DampingProfile gamma = cfg.damping.make(grid);
  const ThickCertificate cert = thickness(gamma, cfg.experiment.eps, cfg.experiment.cube_len);

  {
    std::ofstream os(dir / "profile.csv", std::ios::binary);
    if (!os) throw config_error("cannot open for writing: " + (dir / "profile.csv").string());
    write_damping_csv(gamma, os);
  }

  json report{{"experiment", "thickness"},
              {"certificate", cert_json(cert)},
              {"ess_inf", ess_inf(gamma)},
              {"sup_norm", gamma.sup_norm},
              {"family", family_name(gamma.family)}};
  if (grid->dim() == 1 && cfg.experiment.gcc_window)
    report["gcc"] = {{"window", *cfg.experiment.gcc_window},
                     {"value", gcc_1d(gamma, *cfg.experiment.gcc_window)}};
  write_report(dir, report, cfg);

  ChartSpec chart;
  chart.title = "damping profile";
  chart.xlabel = "x";
  chart.ylabel = "gamma(x)";
  std::vector<double> xs, ys;
  const std::size_t count = grid->dim() == 1 ? grid->size() : grid->points_per_axis();
  for (std::size_t i = 0; i < count; ++i) {
    xs.push_back(grid->dim() == 1 ? grid->coord(i)[0]
                                  : grid->coord(i * grid->points_per_axis())[0]);
    ys.push_back(gamma.gamma[grid->dim() == 1 ? i : i * grid->points_per_axis()]);
  }
  chart.series.push_back({"gamma", xs, ys});
  write_svg_chart((dir / "chart.svg").string(), chart);
}

inline void run_fit(const RunConfig& cfg, const std::filesystem::path& dir, int threads) {
  (void)threads;
  const CsvTable table = read_csv(cfg.experiment.trace);
  if (table.header.size() != 2 || table.header[0] != "t" || table.header[1] != "energy")
    throw config_error("fit: trace csv must have columns t,energy");
  std::vector<double> t, e;
  for (const auto& row : table.rows) {
    t.push_back(row[0]);
    e.push_back(row[1]);
  }
  const double T = t.empty() ? 0.0 : t.back();
  const double lo = cfg.experiment.window ? (*cfg.experiment.window)[0] : 0.2 * T;
  const double hi = cfg.experiment.window ? (*cfg.experiment.window)[1] : T;
  const DecayReport rep = fit_decay(t, e, lo, hi);

  json report{{"experiment", "fit"},
              {"decay", decay_report_json(rep, cfg.s)},
              {"trace", cfg.experiment.trace},
              {"samples", t.size()}};
  write_report(dir, report, cfg);

  ChartSpec chart;
  chart.title = "decay fit";
  chart.xlabel = "t";
  chart.ylabel = "E(t)";
  chart.log_y = true;
  chart.series.push_back({"trace", t, e});
  std::vector<double> fit_y;
  for (double tt : t) fit_y.push_back(model_value(rep.model, rep.amplitude, rep.rate, tt));
  chart.series.push_back({std::string("fit: ") + model_name(rep.model), t, fit_y});
  write_svg_chart((dir / "chart.svg").string(), chart);
}

inline void dispatch(const RunConfig& cfg, const std::string& out_dir, int threads) {
  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw config_error("cannot create output directory: " + out_dir);
  const std::string& t = cfg.experiment.type;
  if (t == "simulate")
    run_simulate(cfg, dir, threads);
  else if (t == "resolvent-sweep")
    run_resolvent_sweep(cfg, dir, threads);
  else if (t == "spectral-constant")
    run_spectral_constant(cfg, dir, threads);
  else if (t == "uncertainty-sweep")
    run_uncertainty_sweep(cfg, dir, threads);
  else if (t == "thickness")
    run_thickness(cfg, dir, threads);
  else if (t == "fit")
    run_fit(cfg, dir, threads);
  else
    throw config_error("config: unknown experiment type " + t);
}

// Recursive relative differences between numeric leaves of two reports;
// non-numeric leaves compare for equality.
inline void diff_json(const json& a, const json& b, const std::string& path, json& out) {
  if (a.is_object() && b.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      const std::string& key = it.key();
      if (key == "config" || key == "config_hash") continue;
      const std::string sub = path.empty() ? key : path + "." + key;
      if (b.contains(key))
        diff_json(it.value(), b.at(key), sub, out);
      else
        out[sub] = "missing-in-b";
    }
    return;
  }
  if (a.is_array() && b.is_array()) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
      diff_json(a[i], b[i], path + "[" + std::to_string(i) + "]", out);
    return;
  }
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    const double denom = std::max({std::abs(x), std::abs(y), 1e-300});
    out[path] = std::abs(x - y) / denom;
    return;
  }
  if (a != b) out[path] = "mismatch";
}

inline int run_compare(const std::string& path_a, const std::string& path_b) {
  json a, b;
  {
    std::ifstream ia(path_a), ib(path_b);
    if (!ia || !ib) throw config_error("compare: cannot open report");
    ia >> a;
    ib >> b;
  }
  if (!a.contains("experiment") || !b.contains("experiment") ||
      a["experiment"] != b["experiment"])
    throw config_error("compare: experiment type mismatch");
  json diffs = json::object();
  diff_json(a, b, "", diffs);
  json flags = json::array();
  for (auto it = diffs.begin(); it != diffs.end(); ++it) {
    if (!it.value().is_number()) continue;
    const std::string& key = it.key();
    const bool envelope_constant = key.find("envelope.c") != std::string::npos ||
                                   key.find("envelope.C") != std::string::npos ||
                                   key.find("prediction.c") != std::string::npos ||
                                   key.find("prediction.C") != std::string::npos;
    if (envelope_constant && it.value().get<double>() > 0.2) flags.push_back(key);
  }
  json out{{"experiment", a["experiment"]},
           {"relative_differences", diffs},
           {"envelope_drift_flags", flags}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace runner_detail

inline int cli_main(int argc, char** argv) {
  CLI::App app{"fracwave: damped fractional Klein-Gordon numerical laboratory"};
  app.require_subcommand(1);

  struct CommonOpts {
    std::string config;
    std::string out = "out";
    std::uint64_t seed = 0;
    int threads = 1;
  };

  const char* run_types[] = {"simulate",          "resolvent-sweep", "spectral-constant",
                             "uncertainty-sweep", "thickness",       "fit"};
  std::vector<std::pair<std::string, CommonOpts>> runs;
  runs.reserve(6);
  std::vector<CLI::Option*> seed_opts;
  for (const char* t : run_types) {
    runs.emplace_back(t, CommonOpts{});
    CommonOpts& o = runs.back().second;
    CLI::App* sub = app.add_subcommand(t, std::string("run a ") + t + " experiment");
    sub->add_option("--config", o.config, "JSON experiment config")->required();
    sub->add_option("--out", o.out, "output directory");
    seed_opts.push_back(sub->add_option("--seed", o.seed, "override the config seed"));
    sub->add_option("--threads", o.threads, "sweep worker threads");
  }

  std::string cmp_a, cmp_b;
  CLI::App* cmp = app.add_subcommand("compare", "diff two report.json files");
  cmp->add_option("report_a", cmp_a)->required();
  cmp->add_option("report_b", cmp_b)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cout << json{{"error", {{"type", "validation"}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  }

  try {
    if (cmp->parsed()) return runner_detail::run_compare(cmp_a, cmp_b);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      auto& [type, opts] = runs[i];
      if (!app.get_subcommand(type)->parsed()) continue;
      RunConfig cfg = RunConfig::load(opts.config);
      if (cfg.experiment.type != type)
        throw config_error("config: experiment.type is '" + cfg.experiment.type +
                           "' but the subcommand is '" + type + "'");
      if (seed_opts[i]->count() > 0) cfg.seed = opts.seed;
      runner_detail::dispatch(cfg, opts.out, opts.threads);
      return 0;
    }
    return 2;
  } catch (const config_error& e) {
    std::cout << json{{"error", {{"type", "validation"}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  } catch (const convergence_error& e) {
    std::cout << json{{"error",
                       {{"type", "convergence"},
                        {"message", e.what()},
                        {"residual", e.residual}}}}
                     .dump()
              << "\n";
    return 4;
  } catch (const std::exception& e) {  // numeric_error, pole_error, io failures
    std::cout << json{{"error", {{"type", "numeric"}, {"message", e.what()}}}}.dump() << "\n";
    return 3;
  }
}

}  // namespace fracwave
