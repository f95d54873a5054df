// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace optoring {

/// Lattice connectivity of the optical layer. The mechanical modes are never
/// directly coupled; all inter-site structure lives in this adjacency matrix.
enum class Topology { ring, open_chain, custom };

/// Drive specification mode. `amplitude_driven` prescribes the laser
/// amplitudes F and leaves the optical mean fields to a self-consistent
/// solve; `alpha_prescribed` fixes the optical mean-field magnitudes
/// directly and bypasses the solve.
enum class DriveMode { amplitude_driven, alpha_prescribed };

struct LatticeSpec {
  int L = 1;
  /// Symmetric {0,1} matrix with zero diagonal, one row/column per site.
  Eigen::MatrixXi adjacency;
  Topology topology_tag = Topology::custom;
};

struct DriveSpec {
  DriveMode mode = DriveMode::alpha_prescribed;
  /// |F| per site, used when mode == amplitude_driven.
  double F_magnitude = 0.0;
  /// |alpha| per site, used when mode == alpha_prescribed.
  double alpha_magnitude = 0.0;
  /// Homogeneous phase gradient phi in radians; site l carries phase l*phi.
  double phase_gradient = 0.0;
  /// Optional explicit per-site phases (radians). When nonempty (must have
  /// length L) it overrides the l*phi rule.
  std::vector<double> phases;
};

/// Full physical parameter set. All frequencies and rates are dimensionless,
/// expressed in units of a reference frequency (the mechanical frequency of
/// site 0 by default); outputs record that convention.
struct ModelParams {
  LatticeSpec lattice;
  Eigen::VectorXd omega_m;  ///< mechanical frequencies, length L
  Eigen::VectorXd delta;    ///< bare drive detunings, length L
  Eigen::VectorXd g;        ///< vacuum optomechanical couplings, length L
  double J = 0.0;           ///< photon hopping rate (scalar)
  Eigen::VectorXd gamma_c;  ///< photon loss rates, length L
  Eigen::VectorXd gamma_m;  ///< phonon damping rates, length L
  Eigen::VectorXd nbar;     ///< bath occupations, length L, each >= 0
  DriveSpec drive;
};

/// Nearest-neighbour ring lattice. L=1 degenerates to no neighbours and L=2
/// to a single undoubled bond.
inline LatticeSpec build_ring(int L) {
  if (L < 1) throw std::invalid_argument("build_ring: L must be >= 1");
  LatticeSpec spec;
  spec.L = L;
  spec.topology_tag = Topology::ring;
  spec.adjacency = Eigen::MatrixXi::Zero(L, L);
  if (L == 2) {
    spec.adjacency(0, 1) = 1;
    spec.adjacency(1, 0) = 1;
  } else if (L >= 3) {
    for (int l = 0; l < L; ++l) {
      const int r = (l + 1) % L;
      spec.adjacency(l, r) = 1;
      spec.adjacency(r, l) = 1;
    }
  }
  return spec;
}

/// Open nearest-neighbour chain; L=1 has no bonds.
inline LatticeSpec build_chain(int L) {
  if (L < 1) throw std::invalid_argument("build_chain: L must be >= 1");
  LatticeSpec spec;
  spec.L = L;
  spec.topology_tag = Topology::open_chain;
  spec.adjacency = Eigen::MatrixXi::Zero(L, L);
  for (int l = 0; l + 1 < L; ++l) {
    spec.adjacency(l, l + 1) = 1;
    spec.adjacency(l + 1, l) = 1;
  }
  return spec;
}

/// Enforces the structural invariants of a LatticeSpec: square {0,1}
/// adjacency, symmetric, zero diagonal, and the exact bond pattern implied
/// by the topology tag. Throws std::invalid_argument on violation.
inline void validate_lattice(const LatticeSpec& spec) {
  if (spec.L < 1) throw std::invalid_argument("lattice: L must be >= 1");
  const int L = spec.L;
  if (spec.adjacency.rows() != L || spec.adjacency.cols() != L)
    throw std::invalid_argument("lattice: adjacency must be L x L");
  for (int i = 0; i < L; ++i) {
    if (spec.adjacency(i, i) != 0)
      throw std::invalid_argument("lattice: adjacency diagonal must be zero");
    for (int j = 0; j < L; ++j) {
      const int a = spec.adjacency(i, j);
      if (a != 0 && a != 1)
        throw std::invalid_argument("lattice: adjacency entries must be 0 or 1");
      if (a != spec.adjacency(j, i))
        throw std::invalid_argument("lattice: adjacency must be symmetric");
    }
  }
  if (spec.topology_tag == Topology::ring) {
    const LatticeSpec ref = build_ring(L);
    if (spec.adjacency != ref.adjacency)
      throw std::invalid_argument("lattice: ring tag requires the nearest-neighbour ring pattern");
  } else if (spec.topology_tag == Topology::open_chain) {
    const LatticeSpec ref = build_chain(L);
    if (spec.adjacency != ref.adjacency)
      throw std::invalid_argument("lattice: open_chain tag requires the nearest-neighbour chain pattern");
  }
}

/// Enforces dimensional and sign invariants of ModelParams.
inline void validate_params(const ModelParams& p) {
  validate_lattice(p.lattice);
  const int L = p.lattice.L;
  auto check_len = [L](const Eigen::VectorXd& v, const char* name) {
    if (v.size() != L)
      throw std::invalid_argument(std::string("params: ") + name + " must have length L");
  };
  check_len(p.omega_m, "omega_m");
  check_len(p.delta, "delta");
  check_len(p.g, "g");
  check_len(p.gamma_c, "gamma_c");
  check_len(p.gamma_m, "gamma_m");
  check_len(p.nbar, "nbar");
  auto check_nonneg = [](const Eigen::VectorXd& v, const char* name) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (!(v[i] >= 0.0))
        throw std::invalid_argument(std::string("params: ") + name + " must be nonnegative");
  };
  check_nonneg(p.gamma_c, "gamma_c");
  check_nonneg(p.gamma_m, "gamma_m");
  check_nonneg(p.nbar, "nbar");
  if (!(p.J >= 0.0)) throw std::invalid_argument("params: J must be nonnegative");
  if (p.drive.mode == DriveMode::amplitude_driven) {
    if (!(p.drive.F_magnitude >= 0.0))
      throw std::invalid_argument("drive: F_magnitude must be nonnegative");
  } else {
    if (!(p.drive.alpha_magnitude >= 0.0))
      throw std::invalid_argument("drive: alpha_magnitude must be nonnegative");
  }
  if (!p.drive.phases.empty() && static_cast<int>(p.drive.phases.size()) != L)
    throw std::invalid_argument("drive: phases override must have length L");
}

/// Per-site drive phase: the explicit override when given, l * phi otherwise.
inline double drive_phase(const DriveSpec& drive, int site) {
  if (!drive.phases.empty()) return drive.phases[static_cast<std::size_t>(site)];
  return static_cast<double>(site) * drive.phase_gradient;
}

constexpr double two_pi = 6.283185307179586476925286766559;

/// Detects whether phi is a lattice-commensurate phase 2*pi*n/L and returns
/// the integer n normalized to [0, L). Commensurate phases admit exact
/// integer-index trigonometry on the k grid; incommensurate ones fall back
/// to direct evaluation and trigger an advisory warning on rings.
inline std::optional<int> phase_grid_index(double phi, int L) {
  if (L < 1) return std::nullopt;
  const double n_real = phi * static_cast<double>(L) / two_pi;
  const double n_rounded = std::nearbyint(n_real);
  if (std::abs(n_rounded) > 1e15) return std::nullopt;
  const auto n = static_cast<long long>(n_rounded);
  const double reconstructed = two_pi * static_cast<double>(n) / static_cast<double>(L);
  if (std::abs(phi - reconstructed) > 1e-12 * std::max(1.0, std::abs(phi))) return std::nullopt;
  const long long m = ((n % L) + L) % L;
  return static_cast<int>(m);
}

}  // namespace optoring
