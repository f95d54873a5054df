// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "optoring/errors.hpp"
#include "optoring/model.hpp"

namespace optoring {

using complexd = std::complex<double>;

/// Classical working point of the driven lattice: optical amplitudes alpha,
/// static mechanical displacements beta, shifted detunings delta_tilde and
/// the linearized couplings G = g * alpha.
struct MeanFieldSolution {
  Eigen::VectorXcd alpha;
  Eigen::VectorXcd beta;
  Eigen::VectorXd delta_tilde;
  Eigen::VectorXcd G;
  /// Max-norm of the self-consistency defect at the returned alpha. Exactly
  /// zero in alpha_prescribed mode, <= 1e-12 after a converged solve.
  double residual = 0.0;
};

/// Detuning shifted by the static radiation-pressure displacement,
/// delta + 2 g^2 |alpha|^2 / omega_m per site. Requires omega_m > 0.
inline Eigen::VectorXd effective_detuning(const Eigen::VectorXd& delta,
                                          const Eigen::VectorXd& g,
                                          const Eigen::VectorXd& alpha_abs2,
                                          const Eigen::VectorXd& omega_m) {
  const Eigen::Index L = delta.size();
  if (g.size() != L || alpha_abs2.size() != L || omega_m.size() != L)
    throw std::invalid_argument("effective_detuning: length mismatch");
  Eigen::VectorXd out(L);
  for (Eigen::Index l = 0; l < L; ++l) {
    if (!(omega_m[l] > 0.0))
      throw std::domain_error("effective_detuning: omega_m must be positive");
    out[l] = delta[l] + 2.0 * g[l] * g[l] * alpha_abs2[l] / omega_m[l];
  }
  return out;
}

namespace detail {

inline Eigen::VectorXcd static_displacement(const ModelParams& p, const Eigen::VectorXcd& alpha) {
  const int L = p.lattice.L;
  Eigen::VectorXcd beta(L);
  for (int l = 0; l < L; ++l) {
    const double a2 = std::norm(alpha[l]);
    beta[l] = p.g[l] * a2 / complexd(p.omega_m[l], -0.5 * p.gamma_m[l]);
  }
  return beta;
}

/// Defect of F = (Diag(delta_tilde) + i Diag(gamma_c)/2 + (J/2) A) alpha,
/// with delta_tilde evaluated at the given alpha. Max-norm.
inline double self_consistency_defect(const ModelParams& p, const Eigen::VectorXcd& F,
                                      const Eigen::VectorXcd& alpha) {
  const int L = p.lattice.L;
  const Eigen::VectorXd dt =
      effective_detuning(p.delta, p.g, alpha.cwiseAbs2(), p.omega_m);
  double worst = 0.0;
  for (int l = 0; l < L; ++l) {
    complexd lhs = F[l] - (dt[l] + complexd(0.0, 0.5 * p.gamma_c[l])) * alpha[l];
    for (int m = 0; m < L; ++m)
      if (p.lattice.adjacency(l, m) != 0) lhs -= 0.5 * p.J * alpha[m];
    worst = std::max(worst, std::abs(lhs));
  }
  return worst;
}

}  // namespace detail

/// Solves for the classical working point. In alpha_prescribed mode the
/// amplitudes are taken as given with phases from the drive spec. In
/// amplitude_driven mode a damped fixed-point iteration alternates a linear
/// solve at frozen delta_tilde with a detuning update (damping 0.5, at most
/// 10000 rounds); non-convergence raises solver_error with the last defect.
inline MeanFieldSolution solve_mean_field(const ModelParams& p) {
  validate_params(p);
  const int L = p.lattice.L;
  MeanFieldSolution sol;

  if (p.drive.mode == DriveMode::alpha_prescribed) {
    sol.alpha.resize(L);
    for (int l = 0; l < L; ++l) {
      const double ph = drive_phase(p.drive, l);
      sol.alpha[l] = p.drive.alpha_magnitude * complexd(std::cos(ph), std::sin(ph));
    }
    sol.delta_tilde = effective_detuning(p.delta, p.g, sol.alpha.cwiseAbs2(), p.omega_m);
    sol.G = p.g.cast<complexd>().cwiseProduct(sol.alpha);
    sol.beta = detail::static_displacement(p, sol.alpha);
    sol.residual = 0.0;
    return sol;
  }

  Eigen::VectorXcd F(L);
  for (int l = 0; l < L; ++l) {
    const double ph = drive_phase(p.drive, l);
    F[l] = p.drive.F_magnitude * complexd(std::cos(ph), std::sin(ph));
  }

  constexpr double tol = 1e-12;
  constexpr int max_rounds = 10000;
  constexpr double damping = 0.5;

  Eigen::VectorXcd alpha = Eigen::VectorXcd::Zero(L);
  double defect = detail::self_consistency_defect(p, F, alpha);
  int round = 0;
  while (defect > tol) {
    if (++round > max_rounds)
      throw solver_error("solve_mean_field: fixed-point iteration did not converge", defect);
    const Eigen::VectorXd dt = effective_detuning(p.delta, p.g, alpha.cwiseAbs2(), p.omega_m);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(L, L);
    for (int l = 0; l < L; ++l) {
      M(l, l) = complexd(dt[l], 0.5 * p.gamma_c[l]);
      for (int m = 0; m < L; ++m)
        if (p.lattice.adjacency(l, m) != 0) M(l, m) += 0.5 * p.J;
    }
    const Eigen::VectorXcd next = M.partialPivLu().solve(F);
    alpha = (1.0 - damping) * alpha + damping * next;
    defect = detail::self_consistency_defect(p, F, alpha);
  }

  sol.alpha = alpha;
  sol.delta_tilde = effective_detuning(p.delta, p.g, alpha.cwiseAbs2(), p.omega_m);
  sol.G = p.g.cast<complexd>().cwiseProduct(alpha);
  sol.beta = detail::static_displacement(p, alpha);
  sol.residual = defect;
  return sol;
}

/// Advisory checks on the working point. Returns human-readable warnings and
/// never blocks: the weak-coupling condition wants every linearized coupling
/// small against every photon linewidth, and ring phase gradients off the
/// 2*pi*n/L grid lose the exact symmetry guarantees of the k-space path.
inline std::vector<std::string> validate_regime(const ModelParams& p,
                                                const MeanFieldSolution& mf) {
  std::vector<std::string> warnings;
  const int L = p.lattice.L;
  double max_G = 0.0;
  for (int l = 0; l < L; ++l) max_G = std::max(max_G, p.g[l] * std::abs(mf.alpha[l]));
  const double min_gamma_c = p.gamma_c.minCoeff();
  if (min_gamma_c < 10.0 * max_G) {
    warnings.push_back(
        "weak-coupling margin: min gamma_c = " + std::to_string(min_gamma_c) +
        " is below 10 * max g|alpha| = " + std::to_string(10.0 * max_G) +
        "; the eliminated description degrades as g|alpha| approaches gamma_c");
  }
  if (p.lattice.topology_tag == Topology::ring && p.drive.phases.empty() &&
      !phase_grid_index(p.drive.phase_gradient, L)) {
    warnings.push_back(
        "phase gradient is not commensurate with the ring (phi != 2*pi*n/L); "
        "k-space results use direct trigonometry without exact symmetry guarantees");
  }
  return warnings;
}

}  // namespace optoring
