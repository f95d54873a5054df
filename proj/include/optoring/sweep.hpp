// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "optoring/config.hpp"
#include "optoring/model.hpp"

namespace optoring {

enum class PointStatus { ok, warned, unstable };

inline const char* to_string(PointStatus s) {
  switch (s) {
    case PointStatus::ok: return "ok";
    case PointStatus::warned: return "warned";
    case PointStatus::unstable: return "unstable";
  }
  return "?";
}

/// One resolved grid point: the axis indices and values it came from and
/// the fully substituted parameter set.
struct GridPoint {
  int i = 0;
  int j = 0;
  double value1 = 0.0;
  std::optional<double> value2;
  ModelParams params;
};

inline std::vector<double> linspace(double min, double max, int steps) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    v.push_back(min);
    return v;
  }
  for (int i = 0; i < steps; ++i)
    v.push_back(min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1));
  return v;
}

namespace detail {

inline void set_delta_tilde(ModelParams& p, double target) {
  if (p.drive.mode != DriveMode::alpha_prescribed)
    throw std::invalid_argument("prescribing delta_tilde requires alpha_prescribed drive");
  const double a2 = p.drive.alpha_magnitude * p.drive.alpha_magnitude;
  for (int l = 0; l < p.lattice.L; ++l)
    p.delta[l] = target - 2.0 * p.g[l] * p.g[l] * a2 / p.omega_m[l];
}

}  // namespace detail

/// Substitutes one axis value into a parameter set. Axis vocabulary:
/// delta_tilde (dressed detuning, alpha_prescribed only), J_over_gamma_c
/// (hopping in units of the first site's linewidth), phi (drive gradient),
/// nbar and g (uniform across sites).
inline void apply_axis(ModelParams& p, const std::string& name, double value) {
  if (name == "delta_tilde") {
    detail::set_delta_tilde(p, value);
  } else if (name == "J_over_gamma_c") {
    p.J = value * p.gamma_c[0];
  } else if (name == "phi") {
    if (!p.drive.phases.empty())
      throw std::invalid_argument("phi axis contradicts explicit drive phases");
    p.drive.phase_gradient = value;
  } else if (name == "nbar") {
    p.nbar.setConstant(value);
  } else if (name == "g") {
    p.g.setConstant(value);
  } else {
    throw std::invalid_argument("unknown grid axis \"" + name + "\"");
  }
}

/// Applies one constraint from the fixed vocabulary, re-deriving the bare
/// detuning after all axis substitutions:
///   "delta_tilde = -J - omega_m"              (red sideband of the lowest band edge)
///   "delta_tilde = omega_m - J"               (blue sideband of the lowest band edge)
///   "delta_tilde = -J - omega_m - gamma_c/2"  (red sideband, half a linewidth below)
inline void apply_constraint(ModelParams& p, const std::string& c) {
  if (p.drive.mode != DriveMode::alpha_prescribed)
    throw std::invalid_argument("constraints require alpha_prescribed drive");
  const double a2 = p.drive.alpha_magnitude * p.drive.alpha_magnitude;
  for (int l = 0; l < p.lattice.L; ++l) {
    double target;
    if (c == "delta_tilde = -J - omega_m") {
      target = -p.J - p.omega_m[l];
    } else if (c == "delta_tilde = omega_m - J") {
      target = p.omega_m[l] - p.J;
    } else if (c == "delta_tilde = -J - omega_m - gamma_c/2") {
      target = -p.J - p.omega_m[l] - 0.5 * p.gamma_c[l];
    } else {
      throw std::invalid_argument("unknown constraint \"" + c + "\"");
    }
    p.delta[l] = target - 2.0 * p.g[l] * p.g[l] * a2 / p.omega_m[l];
  }
}

/// Expands a grid over a base parameter set. Points are ordered row-major
/// (axis1 outer, axis2 inner); constraints run after the axis values at
/// every point. Without axes this yields the single constrained base point.
inline std::vector<GridPoint> resolve_grid(const ModelParams& base, const GridSpec& grid) {
  std::vector<GridPoint> points;
  auto finish = [&](GridPoint& gp) {
    for (const std::string& c : grid.constraints) apply_constraint(gp.params, c);
    validate_params(gp.params);
  };
  if (!grid.axis1) {
    GridPoint gp;
    gp.params = base;
    finish(gp);
    points.push_back(std::move(gp));
    return points;
  }
  const std::vector<double> v1 = linspace(grid.axis1->min, grid.axis1->max, grid.axis1->steps);
  if (!grid.axis2) {
    for (int i = 0; i < static_cast<int>(v1.size()); ++i) {
      GridPoint gp;
      gp.i = i;
      gp.value1 = v1[static_cast<std::size_t>(i)];
      gp.params = base;
      apply_axis(gp.params, grid.axis1->name, gp.value1);
      finish(gp);
      points.push_back(std::move(gp));
    }
    return points;
  }
  const std::vector<double> v2 = linspace(grid.axis2->min, grid.axis2->max, grid.axis2->steps);
  for (int i = 0; i < static_cast<int>(v1.size()); ++i)
    for (int j = 0; j < static_cast<int>(v2.size()); ++j) {
      GridPoint gp;
      gp.i = i;
      gp.j = j;
      gp.value1 = v1[static_cast<std::size_t>(i)];
      gp.value2 = v2[static_cast<std::size_t>(j)];
      gp.params = base;
      apply_axis(gp.params, grid.axis1->name, gp.value1);
      apply_axis(gp.params, grid.axis2->name, *gp.value2);
      finish(gp);
      points.push_back(std::move(gp));
    }
  return points;
}

/// Thread-count resolution: the OPTORING_THREADS environment variable wins,
/// then the command-line flag, then the configuration, then the hardware.
inline int resolve_threads(int cli_value, int config_value) {
  if (const char* env = std::getenv("OPTORING_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  if (cli_value >= 1) return cli_value;
  if (config_value >= 1) return config_value;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? static_cast<int>(hw) : 1;
}

/// Work-stealing parallel loop over [0, n). Each worker pulls the next
/// unclaimed index, so results must be written to per-index slots; callers
/// then emit them in index order, which keeps the output independent of the
/// schedule. The first exception wins and is rethrown on the caller.
template <class F>
inline void parallel_for(std::size_t n, int threads, F&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  pool.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace optoring
