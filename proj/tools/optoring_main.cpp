// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
//
// optoring: phonon transport in optically coupled resonator lattices.
// Subcommands compute photon-mediated hopping amplitudes, k-space rate
// spectra, heat-current phase diagrams, ridge decompositions, spatial
// coherence scans, full-covariance benchmarks and two-tone squeezing
// couplings, all from one JSON configuration.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "optoring/optoring.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr const char* kUnits =
    "frequencies and rates in units of the reference mechanical frequency; "
    "heat currents raw and, where annotated, in units of omega_m*gamma_m";

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using optoring::json;

struct CliOptions {
  std::string config_path;
  std::string grid_arg;
  std::string out_dir;
  bool svg = false;
  int threads = 0;
};

struct RunContext {
  optoring::LoadedConfig lc;
  std::string command;
  std::vector<std::string> flags;
  std::string out_dir;
  bool svg = false;
  int threads = 1;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  json points = json::array();
  std::vector<std::string> outputs;
};

json axis_json(const std::optional<optoring::GridAxis>& ax) {
  if (!ax) return nullptr;
  return json{{"name", ax->name}, {"min", ax->min}, {"max", ax->max}, {"steps", ax->steps}};
}

void point_entry(RunContext& ctx, const optoring::GridPoint& gp, optoring::PointStatus st) {
  json e{{"i", gp.i}, {"j", gp.j}, {"status", optoring::to_string(st)}};
  e["value1"] = gp.value1;
  if (gp.value2) e["value2"] = *gp.value2;
  ctx.points.push_back(e);
}

void write_manifest(RunContext& ctx) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  json m{{"tool", "optoring"},
         {"version", kVersion},
         {"command", ctx.command},
         {"flags", ctx.flags},
         {"unit_convention", kUnits},
         {"config_snapshot", ctx.lc.snapshot},
         {"grid",
          json{{"axis1", axis_json(ctx.lc.config.grid.axis1)},
               {"axis2", axis_json(ctx.lc.config.grid.axis2)},
               {"constraints", ctx.lc.config.grid.constraints}}},
         {"threads", ctx.threads},
         {"points", ctx.points},
         {"outputs", ctx.outputs},
         {"timing_seconds", secs}};
  optoring::write_text_file(ctx.out_dir + "/manifest.json", m.dump(2) + "\n");
}

RunContext make_context(const CliOptions& opt, const std::string& command,
                        const std::vector<std::string>& raw_args) {
  RunContext ctx;
  ctx.lc = optoring::load_config(opt.config_path);
  ctx.command = command;
  ctx.flags = raw_args;
  if (!opt.grid_arg.empty()) {
    const optoring::GridSpec cli_grid = optoring::parse_grid_arg(opt.grid_arg);
    ctx.lc.config.grid.axis1 = cli_grid.axis1;
    ctx.lc.config.grid.axis2 = cli_grid.axis2;
  }
  ctx.out_dir = opt.out_dir.empty() ? ctx.lc.config.run.out : opt.out_dir;
  ctx.svg = opt.svg || ctx.lc.config.run.svg;
  ctx.threads = optoring::resolve_threads(opt.threads, ctx.lc.config.run.threads);
  std::filesystem::create_directories(ctx.out_dir);
  return ctx;
}

optoring::PointStatus warn_status(const optoring::ModelParams& p,
                                  const optoring::MeanFieldSolution& mf, bool announce) {
  const std::vector<std::string> warnings = optoring::validate_regime(p, mf);
  if (announce)
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  return warnings.empty() ? optoring::PointStatus::ok : optoring::PointStatus::warned;
}

std::string num(double v) { return optoring::fmt12(v); }

// ---------------------------------------------------------------------------

int cmd_hoppings(const CliOptions& opt, const std::vector<std::string>& raw_args) {
  RunContext ctx = make_context(opt, "hoppings", raw_args);
  if (ctx.lc.config.grid.axis1)
    throw std::invalid_argument("hoppings evaluates a single point; drop the grid axes");
  const std::vector<optoring::GridPoint> pts =
      optoring::resolve_grid(ctx.lc.config.params, ctx.lc.config.grid);
  const optoring::ModelParams& p = pts[0].params;
  const optoring::MeanFieldSolution mf = optoring::solve_mean_field(p);
  const optoring::RingSpectrum rs = optoring::ring_spectrum(p, mf);

  const std::string csv_path = ctx.out_dir + "/hoppings.csv";
  optoring::CsvWriter csv(csv_path);
  csv.row({"p", "J_p_plus", "J_p_minus"});
  for (int pr = 0; pr < rs.L; ++pr)
    csv.row({std::to_string(pr), num(rs.J_p_plus[pr]), num(rs.J_p_minus[pr])});
  ctx.outputs.push_back("hoppings.csv");

  if (ctx.svg) {
    std::vector<double> xs;
    std::vector<double> jp, jm;
    for (int pr = 0; pr < rs.L; ++pr) {
      xs.push_back(pr);
      jp.push_back(rs.J_p_plus[pr]);
      jm.push_back(rs.J_p_minus[pr]);
    }
    if (optoring::svg_lines(ctx.out_dir + "/hoppings.svg", "Photon-mediated hopping amplitudes",
                            "bond range p", "J_p", xs, {{"J_p_plus", jp}, {"J_p_minus", jm}}))
      ctx.outputs.push_back("hoppings.svg");
    else
      std::cerr << "warning: could not write hoppings.svg\n";
  }
  point_entry(ctx, pts[0], warn_status(p, mf, true));
  write_manifest(ctx);
  return 0;
}

int cmd_rates(const CliOptions& opt, const std::vector<std::string>& raw_args) {
  RunContext ctx = make_context(opt, "rates", raw_args);
  if (ctx.lc.config.grid.axis1)
    throw std::invalid_argument("rates evaluates a single point; drop the grid axes");
  const std::vector<optoring::GridPoint> pts =
      optoring::resolve_grid(ctx.lc.config.params, ctx.lc.config.grid);
  const optoring::ModelParams& p = pts[0].params;
  const optoring::MeanFieldSolution mf = optoring::solve_mean_field(p);
  const optoring::RingSpectrum rs = optoring::ring_spectrum(p, mf);

  Eigen::VectorXd nk = Eigen::VectorXd::Constant(rs.L, kNaN);
  try {
    nk = optoring::steady_state(p, mf).populations_k;
  } catch (const optoring::instability_error&) {
    for (int m = 0; m < rs.L; ++m) {
      const double pump = rs.Gamma_up_k[optoring::detail::imod(-m, rs.L)];
      const double net = rs.Gamma_down_k[m] - pump;
      if (net > 0.0) nk[m] = pump / net;
    }
  }

  const std::string csv_path = ctx.out_dir + "/rates.csv";
  optoring::CsvWriter csv(csv_path);
  csv.row({"k_index", "k", "omega_k", "Gamma_down_k", "Gamma_up_k", "stable", "n_k"});
  for (int m = 0; m < rs.L; ++m)
    csv.row({std::to_string(m), num(rs.k_grid[m]), num(rs.omega_k[m]), num(rs.Gamma_down_k[m]),
             num(rs.Gamma_up_k[m]), rs.stable[static_cast<std::size_t>(m)] ? "1" : "0",
             num(nk[m])});
  ctx.outputs.push_back("rates.csv");

  if (ctx.svg) {
    std::vector<double> xs, gd, gu, wk;
    for (int m = 0; m < rs.L; ++m) {
      xs.push_back(rs.k_grid[m]);
      gd.push_back(rs.Gamma_down_k[m]);
      gu.push_back(rs.Gamma_up_k[m]);
      wk.push_back(rs.omega_k[m] - p.omega_m[0]);
    }
    if (optoring::svg_lines(ctx.out_dir + "/rates.svg", "Bloch-mode rates and dispersion shift",
                            "k", "rate / shift", xs,
                            {{"Gamma_down_k", gd}, {"Gamma_up_k", gu}, {"omega_k - omega_m", wk}}))
      ctx.outputs.push_back("rates.svg");
    else
      std::cerr << "warning: could not write rates.svg\n";
  }
  point_entry(ctx, pts[0], warn_status(p, mf, true));
  write_manifest(ctx);
  return 0;
}

int cmd_phase_diagram(const CliOptions& opt, const std::vector<std::string>& raw_args) {
  RunContext ctx = make_context(opt, "phase-diagram", raw_args);
  optoring::Config& cfg = ctx.lc.config;
  const double om = cfg.params.omega_m[0];
  if (!cfg.grid.axis1) {
    cfg.grid.axis1 = optoring::GridAxis{"J_over_gamma_c", 0.25, 4.0, 10};
    cfg.grid.axis2 = optoring::GridAxis{"delta_tilde", -2.5 * om, 2.5 * om, 10};
  }
  const std::vector<optoring::GridPoint> pts = optoring::resolve_grid(cfg.params, cfg.grid);

  struct Row {
    optoring::PointStatus status = optoring::PointStatus::ok;
    double q_c = kNaN;
    double max_nk = kNaN;
  };
  std::vector<Row> rows(pts.size());
  optoring::parallel_for(pts.size(), ctx.threads, [&](std::size_t idx) {
    const optoring::ModelParams& p = pts[idx].params;
    const optoring::MeanFieldSolution mf = optoring::solve_mean_field(p);
    Row& r = rows[idx];
    r.status = warn_status(p, mf, false);
    try {
      const optoring::CurrentReport rep = optoring::steady_state(p, mf);
      r.q_c = rep.Q_C;
      r.max_nk = rep.populations_k.maxCoeff();
    } catch (const optoring::instability_error&) {
      r.status = optoring::PointStatus::unstable;
    }
  });

  const double gm = cfg.params.gamma_m[0];
  const std::string a1 = cfg.grid.axis1->name;
  const std::string a2 = cfg.grid.axis2 ? cfg.grid.axis2->name : "";
  const std::string csv_path = ctx.out_dir + "/phase-diagram.csv";
  optoring::CsvWriter csv(csv_path);
  csv.row({"i", "j", a1, a2.empty() ? "axis2" : a2, "Q_C", "Q_C[omega_m*gamma_m]", "max_n_k",
           "status"});
  for (std::size_t idx = 0; idx < pts.size(); ++idx) {
    const auto& gp = pts[idx];
    const Row& r = rows[idx];
    csv.row({std::to_string(gp.i), std::to_string(gp.j), num(gp.value1),
             gp.value2 ? num(*gp.value2) : "", num(r.q_c), num(r.q_c / (om * gm)),
             num(r.max_nk), optoring::to_string(r.status)});
    point_entry(ctx, gp, r.status);
  }
  ctx.outputs.push_back("phase-diagram.csv");

  if (ctx.svg && cfg.grid.axis2) {
    const int n1 = cfg.grid.axis1->steps;
    const int n2 = cfg.grid.axis2->steps;
    std::vector<double> xs = optoring::linspace(cfg.grid.axis1->min, cfg.grid.axis1->max, n1);
    std::vector<double> ys = optoring::linspace(cfg.grid.axis2->min, cfg.grid.axis2->max, n2);
    std::vector<std::vector<double>> vals(static_cast<std::size_t>(n2),
                                          std::vector<double>(static_cast<std::size_t>(n1), kNaN));
    for (std::size_t idx = 0; idx < pts.size(); ++idx) {
      const auto& gp = pts[idx];
      if (rows[idx].status != optoring::PointStatus::unstable)
        vals[static_cast<std::size_t>(gp.j)][static_cast<std::size_t>(gp.i)] =
            rows[idx].q_c / (om * gm);
    }
    if (optoring::svg_heatmap(ctx.out_dir + "/phase-diagram.svg",
                              "Circulating heat current Q_C [omega_m*gamma_m]", a1, a2, xs, ys,
                              vals))
      ctx.outputs.push_back("phase-diagram.svg");
    else
      std::cerr << "warning: could not write phase-diagram.svg\n";
  }
  write_manifest(ctx);
  return 0;
}

std::optional<optoring::CurrentReport> try_point(const optoring::ModelParams& base,
                                                 double delta_tilde) {
  optoring::ModelParams p = base;
  optoring::apply_axis(p, "delta_tilde", delta_tilde);
  const optoring::MeanFieldSolution mf = optoring::solve_mean_field(p);
  try {
    return optoring::steady_state(p, mf);
  } catch (const optoring::instability_error&) {
    return std::nullopt;
  }
}

int cmd_ridge(const CliOptions& opt, const std::vector<std::string>& raw_args) {
  RunContext ctx = make_context(opt, "ridge", raw_args);
  optoring::Config& cfg = ctx.lc.config;
  if (!cfg.grid.axis1) cfg.grid.axis1 = optoring::GridAxis{"J_over_gamma_c", 0.25, 4.0, 16};
  if (cfg.grid.axis2) throw std::invalid_argument("ridge takes a single grid axis");
  const std::vector<optoring::GridPoint> pts = optoring::resolve_grid(cfg.params, cfg.grid);
  const double om = cfg.params.omega_m[0];
  const double gm = cfg.params.gamma_m[0];

  struct Row {
    optoring::PointStatus status = optoring::PointStatus::unstable;
    double dt_star = kNaN, q_c = kNaN, frac_p1 = kNaN, frac_hi = kNaN;
  };
  std::vector<Row> rows(pts.size());
  optoring::parallel_for(pts.size(), ctx.threads, [&](std::size_t idx) {
    const optoring::ModelParams& p = pts[idx].params;
    const double gc = p.gamma_c[0];
    const double center = -om - p.J;
    const double step = 0.005 * om;
    double best_dt = kNaN, best_q = -1.0;
    for (double dt = center - 5.0 * gc; dt <= center + 5.0 * gc + 0.5 * step; dt += step) {
      const auto rep = try_point(p, dt);
      if (rep && std::abs(rep->Q_C) > best_q) {
        best_q = std::abs(rep->Q_C);
        best_dt = dt;
      }
    }
    Row& r = rows[idx];
    if (!std::isfinite(best_dt)) return;

    // Golden-section refinement of |Q_C| around the scan winner.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = best_dt - step, b = best_dt + step;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    auto fval = [&](double dt) {
      const auto rep = try_point(p, dt);
      return rep ? std::abs(rep->Q_C) : -1.0;
    };
    double f1 = fval(x1), f2 = fval(x2);
    while (b - a > 1e-6 * om) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = fval(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = fval(x1);
      }
    }
    const double dt_star = 0.5 * (a + b);
    const auto rep = try_point(p, dt_star);
    if (!rep) return;
    r.dt_star = dt_star;
    r.q_c = rep->Q_C;
    const double qmag = std::abs(rep->Q_C);
    double p1 = rep->Q_p.size() > 0 ? std::abs(rep->Q_p[0]) : 0.0;
    double hi = 0.0;
    for (Eigen::Index k = 1; k < rep->Q_p.size(); ++k) hi += std::abs(rep->Q_p[k]);
    r.frac_p1 = qmag > 0.0 ? p1 / qmag : kNaN;
    r.frac_hi = qmag > 0.0 ? hi / qmag : kNaN;
    const optoring::MeanFieldSolution mf = optoring::solve_mean_field(pts[idx].params);
    r.status = warn_status(pts[idx].params, mf, false);
  });

  const std::string a1 = cfg.grid.axis1->name;
  const std::string csv_path = ctx.out_dir + "/ridge.csv";
  optoring::CsvWriter csv(csv_path);
  csv.row({"i", a1, "delta_tilde_star", "Q_C", "Q_C[omega_m*gamma_m]", "frac_p1", "frac_p_ge2",
           "status"});
  for (std::size_t idx = 0; idx < pts.size(); ++idx) {
    const auto& gp = pts[idx];
    const Row& r = rows[idx];
    csv.row({std::to_string(gp.i), num(gp.value1), num(r.dt_star), num(r.q_c),
             num(r.q_c / (om * gm)), num(r.frac_p1), num(r.frac_hi),
             optoring::to_string(r.status)});
    point_entry(ctx, gp, r.status);
  }
  ctx.outputs.push_back("ridge.csv");

  if (ctx.svg) {
    std::vector<double> xs, f1, f2;
    for (std::size_t idx = 0; idx < pts.size(); ++idx) {
      xs.push_back(pts[idx].value1);
      f1.push_back(rows[idx].frac_p1);
      f2.push_back(rows[idx].frac_hi);
    }
    if (optoring::svg_lines(ctx.out_dir + "/ridge.svg",
                            "Range decomposition along the current ridge", a1,
                            "|Q_p| / |Q_C|", xs, {{"frac_p1", f1}, {"frac_p_ge2", f2}}))
      ctx.outputs.push_back("ridge.svg");
    else
      std::cerr << "warning: could not write ridge.svg\n";
  }
  write_manifest(ctx);
  return 0;
}

int cmd_coherence(const CliOptions& opt, const std::vector<std::string>& raw_args) {
  RunContext ctx = make_context(opt, "coherence", raw_args);
  optoring::Config& cfg = ctx.lc.config;
  if (!cfg.grid.axis1) cfg.grid.axis1 = optoring::GridAxis{"J_over_gamma_c", 0.5, 4.0, 15};
  if (cfg.grid.axis2) throw std::invalid_argument("coherence takes a single grid axis");
  if (cfg.grid.constraints.empty())
    cfg.grid.constraints.push_back("delta_tilde = -J - omega_m");
  const std::vector<optoring::GridPoint> pts = optoring::resolve_grid(cfg.params, cfg.grid);

  struct Row {
    optoring::PointStatus status = optoring::PointStatus::ok;
    double g1[3] = {kNaN, kNaN, kNaN};
  };
  std::vector<Row> rows(pts.size());
  optoring::parallel_for(pts.size(), ctx.threads, [&](std::size_t idx) {
    const optoring::ModelParams& p = pts[idx].params;
    const optoring::MeanFieldSolution mf = optoring::solve_mean_field(p);
    Row& r = rows[idx];
    r.status = warn_status(p, mf, false);
    try {
      const optoring::CurrentReport rep = optoring::steady_state(p, mf);
      for (int pr = 1; pr <= 3 && pr < p.lattice.L; ++pr)
        r.g1[pr - 1] = std::abs(rep.g1(0, pr));
    } catch (const optoring::instability_error&) {
      r.status = optoring::PointStatus::unstable;
    }
  });

  const std::string a1 = cfg.grid.axis1->name;
  const std::string csv_path = ctx.out_dir + "/coherence.csv";
  optoring::CsvWriter csv(csv_path);
  csv.row({"i", a1, "abs_g1_p1", "abs_g1_p2", "abs_g1_p3", "status"});
  for (std::size_t idx = 0; idx < pts.size(); ++idx) {
    const auto& gp = pts[idx];
    const Row& r = rows[idx];
    csv.row({std::to_string(gp.i), num(gp.value1), num(r.g1[0]), num(r.g1[1]), num(r.g1[2]),
             optoring::to_string(r.status)});
    point_entry(ctx, gp, r.status);
  }
  ctx.outputs.push_back("coherence.csv");

  if (ctx.svg) {
    std::vector<double> xs, s1, s2, s3;
    for (std::size_t idx = 0; idx < pts.size(); ++idx) {
      xs.push_back(pts[idx].value1);
      s1.push_back(rows[idx].g1[0]);
      s2.push_back(rows[idx].g1[1]);
      s3.push_back(rows[idx].g1[2]);
    }
    if (optoring::svg_lines(ctx.out_dir + "/coherence.svg", "First-order spatial coherence", a1,
                            "|g1(0,p)|", xs,
                            {{"|g1| p=1", s1}, {"|g1| p=2", s2}, {"|g1| p=3", s3}}))
      ctx.outputs.push_back("coherence.svg");
    else
      std::cerr << "warning: could not write coherence.svg\n";
  }
  write_manifest(ctx);
  return 0;
}

int cmd_benchmark(const CliOptions& opt, const std::vector<std::string>& raw_args) {
  RunContext ctx = make_context(opt, "benchmark", raw_args);
  optoring::Config& cfg = ctx.lc.config;
  const double om = cfg.params.omega_m[0];
  const double gm = cfg.params.gamma_m[0];

  struct Task {
    std::string sweep;
    optoring::GridPoint gp;
  };
  std::vector<Task> tasks;
  if (cfg.grid.axis1) {
    for (auto& gp : optoring::resolve_grid(cfg.params, cfg.grid))
      tasks.push_back({"grid", std::move(gp)});
  } else {
    optoring::GridSpec coupling;
    coupling.axis1 = optoring::GridAxis{"J_over_gamma_c", 0.5, 5.0, 10};
    coupling.constraints = {"delta_tilde = -J - omega_m"};
    for (auto& gp : optoring::resolve_grid(cfg.params, coupling))
      tasks.push_back({"coupling", std::move(gp)});
    optoring::GridSpec detuning;
    detuning.axis1 = optoring::GridAxis{"delta_tilde", -2.5 * om, 2.5 * om, 21};
    optoring::ModelParams base = cfg.params;
    base.J = base.gamma_c[0];
    for (auto& gp : optoring::resolve_grid(base, detuning))
      tasks.push_back({"detuning", std::move(gp)});
  }

  struct Row {
    optoring::PointStatus status = optoring::PointStatus::ok;
    double delta_err = kNaN, q_eff = kNaN, q_mf = kNaN;
  };
  std::vector<Row> rows(tasks.size());
  optoring::parallel_for(tasks.size(), ctx.threads, [&](std::size_t idx) {
    const optoring::ModelParams& p = tasks[idx].gp.params;
    const optoring::MeanFieldSolution mf = optoring::solve_mean_field(p);
    Row& r = rows[idx];
    r.status = warn_status(p, mf, false);
    try {
      const optoring::BenchmarkReport rep = optoring::compare_theories(p, mf);
      r.delta_err = rep.delta;
      r.q_eff = rep.currents_eff.Q_C;
      r.q_mf = rep.currents_mf.Q_C;
    } catch (const optoring::instability_error&) {
      r.status = optoring::PointStatus::unstable;
    }
  });

  const std::string csv_path = ctx.out_dir + "/benchmark.csv";
  optoring::CsvWriter csv(csv_path);
  csv.row({"sweep", "i", "j", "axis1", "axis2", "delta_err", "Q_C_eff", "Q_C_mf",
           "Q_C_eff[omega_m*gamma_m]", "Q_C_mf[omega_m*gamma_m]", "status"});
  for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
    const auto& t = tasks[idx];
    const Row& r = rows[idx];
    csv.row({t.sweep, std::to_string(t.gp.i), std::to_string(t.gp.j), num(t.gp.value1),
             t.gp.value2 ? num(*t.gp.value2) : "", num(r.delta_err), num(r.q_eff), num(r.q_mf),
             num(r.q_eff / (om * gm)), num(r.q_mf / (om * gm)), optoring::to_string(r.status)});
    point_entry(ctx, t.gp, r.status);
  }
  ctx.outputs.push_back("benchmark.csv");

  if (ctx.svg) {
    std::vector<double> xs, ds;
    for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
      if (tasks[idx].sweep == "detuning") continue;
      xs.push_back(tasks[idx].gp.value1);
      ds.push_back(rows[idx].delta_err);
    }
    if (!xs.empty() &&
        optoring::svg_lines(ctx.out_dir + "/benchmark.svg",
                            "Eliminated theory vs full covariance", "axis1",
                            "relative error delta", xs, {{"delta_err", ds}}))
      ctx.outputs.push_back("benchmark.svg");
    else if (!xs.empty())
      std::cerr << "warning: could not write benchmark.svg\n";
  }
  write_manifest(ctx);
  return 0;
}

int cmd_squeezing(const CliOptions& opt, const std::vector<std::string>& raw_args) {
  RunContext ctx = make_context(opt, "squeezing", raw_args);
  optoring::Config& cfg = ctx.lc.config;
  if (!cfg.squeeze.present)
    throw std::invalid_argument("squeezing needs a \"squeeze\" block in the configuration");
  if (cfg.delta_tilde_input)
    throw std::invalid_argument(
        "squeezing reads \"delta\" directly as the working-point detuning; "
        "a \"delta_tilde\" input would be shifted twice");
  if (ctx.lc.config.grid.axis1)
    throw std::invalid_argument("squeezing evaluates a single point; drop the grid axes");
  const optoring::ModelParams& p = cfg.params;
  const int L = p.lattice.L;

  // The two tones define their own working point; delta is used as the
  // dressed detuning of the generator without a single-tone shift.
  const optoring::PhotonGenerator gen =
      optoring::build_generator(p.lattice.adjacency, p.J, p.delta, p.gamma_c);

  Eigen::VectorXd theta(L), varphi(L);
  if (!cfg.squeeze.theta.empty()) {
    for (int l = 0; l < L; ++l) {
      theta[l] = cfg.squeeze.theta[static_cast<std::size_t>(l)];
      varphi[l] = cfg.squeeze.varphi[static_cast<std::size_t>(l)];
    }
  } else {
    const double gp2 = cfg.squeeze.G_plus * cfg.squeeze.G_plus;
    const double gm2 = cfg.squeeze.G_minus * cfg.squeeze.G_minus;
    if (!(gm2 > gp2))
      throw std::domain_error("squeezing requires G_minus > G_plus >= 0");
    const double eta = std::sqrt(gm2 - gp2);
    const Eigen::MatrixXcd S = optoring::reservoir_spectrum_at(
        gen, Eigen::VectorXcd::Constant(L, optoring::complexd(eta, 0.0)), 0.0);
    const Eigen::MatrixXcd Omega = (S - S.adjoint()) * optoring::complexd(0.0, -0.5);
    std::tie(theta, varphi) = optoring::phase_matched_phases(Omega, cfg.squeeze.nu);
  }
  Eigen::VectorXcd G_plus(L), G_minus(L);
  for (int l = 0; l < L; ++l) {
    G_plus[l] = cfg.squeeze.G_plus * optoring::complexd(std::cos(theta[l]), std::sin(theta[l]));
    G_minus[l] =
        cfg.squeeze.G_minus * optoring::complexd(std::cos(varphi[l]), std::sin(varphi[l]));
  }
  const optoring::SqueezedEffectiveModel model =
      optoring::two_tone_squeezing_model(gen, G_plus, G_minus);

  const std::string csv_path = ctx.out_dir + "/squeezing.csv";
  optoring::CsvWriter csv(csv_path);
  csv.row({"i", "j", "Omega_re", "Omega_im", "bs_re", "bs_im", "pair_re", "pair_im"});
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      csv.row({std::to_string(i), std::to_string(j), num(model.Omega(i, j).real()),
               num(model.Omega(i, j).imag()), num(model.beamsplitter_coeffs(i, j).real()),
               num(model.beamsplitter_coeffs(i, j).imag()),
               num(model.pairing_coeffs(i, j).real()), num(model.pairing_coeffs(i, j).imag())});
  ctx.outputs.push_back("squeezing.csv");

  if (ctx.svg) {
    std::vector<double> xs, ys;
    std::vector<std::vector<double>> vals(static_cast<std::size_t>(L),
                                          std::vector<double>(static_cast<std::size_t>(L), 0.0));
    for (int i = 0; i < L; ++i) {
      xs.push_back(i);
      ys.push_back(i);
      for (int j = 0; j < L; ++j)
        vals[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            std::abs(model.beamsplitter_coeffs(i, j));
    }
    if (optoring::svg_heatmap(ctx.out_dir + "/squeezing.svg",
                              "Beam-splitter coupling magnitudes", "site j", "site i", xs, ys,
                              vals))
      ctx.outputs.push_back("squeezing.svg");
    else
      std::cerr << "warning: could not write squeezing.svg\n";
  }
  optoring::GridPoint origin;
  origin.params = p;
  point_entry(ctx, origin, optoring::PointStatus::ok);
  write_manifest(ctx);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phonon transport in optically coupled resonator lattices"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd;
    CliOptions opt;
    int (*run)(const CliOptions&, const std::vector<std::string>&);
  };
  // A deque keeps references to earlier elements valid while later
  // subcommands are appended; the parser stores pointers into each opt.
  std::deque<Sub> subs;
  auto add = [&](const char* name, const char* desc,
                 int (*run)(const CliOptions&, const std::vector<std::string>&)) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    subs.push_back({cmd, {}, run});
    CliOptions& o = subs.back().opt;
    cmd->add_option("--config", o.config_path, "JSON configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--grid", o.grid_arg, "grid override, name:min:max:steps[,...]");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_flag("--svg", o.svg, "also write presentation SVG plots");
    cmd->add_option("--threads", o.threads, "worker threads (OPTORING_THREADS overrides)");
  };
  add("hoppings", "photon-mediated hopping amplitudes J_p of a uniform ring", cmd_hoppings);
  add("rates", "Bloch-mode dispersion, damping and pumping rates", cmd_rates);
  add("phase-diagram", "heat current over a two-axis parameter grid", cmd_phase_diagram);
  add("ridge", "detuning of maximal |Q_C| per hopping, with range decomposition", cmd_ridge);
  add("coherence", "spatial coherence |g1| along the red-sideband line", cmd_coherence);
  add("benchmark", "eliminated theory vs full linearized covariance", cmd_benchmark);
  add("squeezing", "two-tone beam-splitter and pairing couplings", cmd_squeezing);

  std::vector<std::string> raw_args;
  for (int i = 1; i < argc; ++i) raw_args.emplace_back(argv[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (Sub& s : subs)
      if (s.cmd->parsed()) return s.run(s.opt, raw_args);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const optoring::config_error& e) {
    std::cerr << "configuration error (" << e.path() << "): " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const optoring::instability_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const optoring::solver_error& e) {
    std::cerr << "solver failure: " << e.what() << " (last residual " << e.last_residual()
              << ")\n";
    return 4;
  } catch (const optoring::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 4;
  }
}
