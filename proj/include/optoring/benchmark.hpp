// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "optoring/elimination.hpp"
#include "optoring/errors.hpp"
#include "optoring/meanfield.hpp"
#include "optoring/model.hpp"
#include "optoring/ring.hpp"

namespace optoring {

/// Linearized photon-phonon system kept in full, without any rotating-wave
/// reduction of the coupling. The operator basis is interleaved per site,
/// photons first: [c_0, c_0^dag, ..., c_{L-1}, c_{L-1}^dag,
///                 d_0, d_0^dag, ..., d_{L-1}, d_{L-1}^dag].
/// M is the drift of the first moments, D the noise matrix of the
/// second-moment flow dC/dt = M C + C M^T + D for C = <phi phi^T>.
struct CovarianceState {
  std::vector<std::string> basis;
  Eigen::MatrixXcd M;
  Eigen::MatrixXcd D;
  Eigen::MatrixXcd C;
};

namespace detail {

inline Eigen::Index ic(int l) { return 2 * l; }
inline Eigen::Index icd(int l) { return 2 * l + 1; }
inline Eigen::Index id_(int L, int l) { return 2 * L + 2 * l; }
inline Eigen::Index idd(int L, int l) { return 2 * L + 2 * l + 1; }

}  // namespace detail

/// Largest real part across the drift spectrum. The system has a unique
/// steady covariance exactly when this is negative with margin.
inline double drift_max_real(const Eigen::MatrixXcd& M) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  if (es.info() != Eigen::Success) throw numerical_error("drift_max_real: eigensolver failed");
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    worst = std::max(worst, es.eigenvalues()[i].real());
  return worst;
}

/// Drift and noise assembly without the stability gate; the gated
/// build_linearized_system below is the normal entry point.
inline CovarianceState assemble_linearized_system(const ModelParams& p,
                                                  const MeanFieldSolution& mf) {
  validate_params(p);
  const int L = p.lattice.L;
  const Eigen::Index N = 4 * static_cast<Eigen::Index>(L);
  CovarianceState st;
  st.basis.reserve(static_cast<std::size_t>(N));
  for (int l = 0; l < L; ++l) {
    st.basis.push_back("c" + std::to_string(l));
    st.basis.push_back("c" + std::to_string(l) + "_dag");
  }
  for (int l = 0; l < L; ++l) {
    st.basis.push_back("d" + std::to_string(l));
    st.basis.push_back("d" + std::to_string(l) + "_dag");
  }

  st.M = Eigen::MatrixXcd::Zero(N, N);
  st.D = Eigen::MatrixXcd::Zero(N, N);
  const complexd I(0.0, 1.0);
  using detail::ic;
  using detail::icd;
  using detail::id_;
  using detail::idd;
  for (int l = 0; l < L; ++l) {
    const complexd G = mf.G[l];
    st.M(ic(l), ic(l)) = complexd(-0.5 * p.gamma_c[l], mf.delta_tilde[l]);
    st.M(icd(l), icd(l)) = complexd(-0.5 * p.gamma_c[l], -mf.delta_tilde[l]);
    for (int m = 0; m < L; ++m) {
      if (p.lattice.adjacency(l, m) == 0) continue;
      st.M(ic(l), ic(m)) += I * (0.5 * p.J);
      st.M(icd(l), icd(m)) -= I * (0.5 * p.J);
    }
    st.M(ic(l), id_(L, l)) = -I * G;
    st.M(ic(l), idd(L, l)) = -I * G;
    st.M(icd(l), id_(L, l)) = I * std::conj(G);
    st.M(icd(l), idd(L, l)) = I * std::conj(G);

    st.M(id_(L, l), id_(L, l)) = complexd(-0.5 * p.gamma_m[l], -p.omega_m[l]);
    st.M(idd(L, l), idd(L, l)) = complexd(-0.5 * p.gamma_m[l], p.omega_m[l]);
    st.M(id_(L, l), ic(l)) = -I * std::conj(G);
    st.M(id_(L, l), icd(l)) = -I * G;
    st.M(idd(L, l), ic(l)) = I * std::conj(G);
    st.M(idd(L, l), icd(l)) = I * G;

    st.D(ic(l), icd(l)) = p.gamma_c[l];
    st.D(id_(L, l), idd(L, l)) = p.gamma_m[l] * (p.nbar[l] + 1.0);
    st.D(idd(L, l), id_(L, l)) = p.gamma_m[l] * p.nbar[l];
  }
  st.C = Eigen::MatrixXcd::Zero(N, N);
  return st;
}

/// Assembles the linearized system and refuses (instability_error) when the
/// drift spectrum reaches into the closed right half plane; marginal modes
/// are rejected together with growing ones.
inline CovarianceState build_linearized_system(const ModelParams& p,
                                               const MeanFieldSolution& mf) {
  CovarianceState st = assemble_linearized_system(p, mf);
  const double worst = drift_max_real(st.M);
  if (!(worst < -1e-12))
    throw instability_error(
        "build_linearized_system: drift spectrum is not strictly decaying "
        "(max Re = " +
        std::to_string(worst) + ")");
  return st;
}

/// Steady second moments: the unique solution of M C + C M^T + D = 0,
/// obtained from the dense vectorized form (I kron M + M kron I) vec(C) =
/// -vec(D) with one step of iterative refinement. The defect is certified
/// to 1e-10 * max|D| and numerical_error is raised past that. D = 0 short
/// circuits to C = 0.
inline Eigen::MatrixXcd steady_covariance(const Eigen::MatrixXcd& M, const Eigen::MatrixXcd& D) {
  const Eigen::Index N = M.rows();
  if (M.cols() != N || D.rows() != N || D.cols() != N)
    throw std::invalid_argument("steady_covariance: dimension mismatch");
  const double dmax = D.cwiseAbs().maxCoeff();
  if (dmax == 0.0) return Eigen::MatrixXcd::Zero(N, N);
  if (N > 64)
    throw std::invalid_argument("steady_covariance: dense vectorized solve is limited to 4L <= 64");

  const Eigen::Index NN = N * N;
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(NN, NN);
  // vec(M C) = (I kron M) vec(C), vec(C M^T) = (M kron I) vec(C),
  // column-major throughout.
  for (Eigen::Index col = 0; col < N; ++col)
    K.block(col * N, col * N, N, N) = M;
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) {
      if (M(i, j) == complexd(0.0, 0.0)) continue;
      for (Eigen::Index r = 0; r < N; ++r) K(i * N + r, j * N + r) += M(i, j);
    }

  Eigen::VectorXcd rhs(NN);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < N; ++i) rhs[j * N + i] = -D(i, j);

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(K);
  Eigen::VectorXcd x = lu.solve(rhs);
  const Eigen::VectorXcd resid = rhs - K * x;
  x += lu.solve(resid);

  const double defect = (rhs - K * x).cwiseAbs().maxCoeff();
  if (!(defect <= 1e-10 * dmax))
    throw numerical_error("steady_covariance: defect " + std::to_string(defect) +
                          " exceeds tolerance; system near singular");

  Eigen::MatrixXcd C(N, N);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < N; ++i) C(i, j) = x[j * N + i];
  return C;
}

inline CovarianceState& steady_covariance(CovarianceState& st) {
  st.C = steady_covariance(st.M, st.D);
  return st;
}

/// Mechanical one-body correlations out of the full covariance,
/// sigma_{l,m} = <d_l^dag d_m>. The extraction cross-checks the canonical
/// commutators <d d^dag> - <d^dag d> = 1 inside the solved covariance and
/// raises numerical_error when they drift beyond 1e-8.
inline Eigen::MatrixXcd sigma_mf(const CovarianceState& st) {
  const Eigen::Index N = st.C.rows();
  if (N % 4 != 0 || st.C.cols() != N)
    throw std::invalid_argument("sigma_mf: covariance has no 4L basis");
  const int L = static_cast<int>(N / 4);
  for (int l = 0; l < L; ++l) {
    const complexd comm =
        st.C(detail::id_(L, l), detail::idd(L, l)) - st.C(detail::idd(L, l), detail::id_(L, l));
    if (std::abs(comm - complexd(1.0, 0.0)) > 1e-8)
      throw numerical_error("sigma_mf: commutator drift at site " + std::to_string(l));
  }
  Eigen::MatrixXcd sigma(L, L);
  for (int l = 0; l < L; ++l)
    for (int m = 0; m < L; ++m) sigma(l, m) = st.C(detail::idd(L, l), detail::id_(L, m));
  return sigma;
}

/// Scale-free distance between two correlation matrices,
/// delta = ||A - B||_2 / ||(A + B) / 2||_2 in spectral norm on the
/// Hermitian parts. A vanishing mean is a domain error.
inline double relative_error(const Eigen::MatrixXcd& sigma_a, const Eigen::MatrixXcd& sigma_b) {
  if (sigma_a.rows() != sigma_b.rows() || sigma_a.cols() != sigma_b.cols())
    throw std::invalid_argument("relative_error: dimension mismatch");
  auto spec_norm = [](const Eigen::MatrixXcd& X) {
    const Eigen::MatrixXcd H = 0.5 * (X + X.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  };
  const double denom = spec_norm(0.5 * (sigma_a + sigma_b));
  if (denom == 0.0) throw std::domain_error("relative_error: zero reference norm");
  return spec_norm(sigma_a - sigma_b) / denom;
}

/// Heat currents carried by a correlation matrix on a uniform ring. Entry
/// flow(l, p-1) is the power flowing from site l to site l+p in units of
/// the mechanical quantum over omega_m,
///   <j_{l -> l+p}> = sum_± J_p^± Im(e^{∓ i phi p} sigma_{l+p, l}),
/// and Q_p = omega_m sum_l <j_{l -> l+p}>. A diagonal sigma carries none.
struct BondCurrents {
  Eigen::MatrixXd flow;  ///< L x (ceil(L/2) - 1)
  Eigen::VectorXd Q_p;
  double Q_C = 0.0;
};

inline BondCurrents current_from_sigma(const Eigen::MatrixXcd& sigma,
                                       const Eigen::VectorXd& J_p_plus,
                                       const Eigen::VectorXd& J_p_minus, double phi,
                                       double omega_m) {
  const int L = static_cast<int>(sigma.rows());
  if (sigma.cols() != L || J_p_plus.size() != L || J_p_minus.size() != L)
    throw std::invalid_argument("current_from_sigma: dimension mismatch");
  const int p_count = (L + 1) / 2 - 1;
  BondCurrents bc;
  bc.flow = Eigen::MatrixXd::Zero(L, std::max(p_count, 0));
  bc.Q_p.resize(std::max(p_count, 0));
  bc.Q_C = 0.0;
  for (int pr = 1; pr <= p_count; ++pr) {
    const double c = std::cos(phi * pr);
    const double s = std::sin(phi * pr);
    double total = 0.0;
    for (int l = 0; l < L; ++l) {
      const complexd sp = sigma((l + pr) % L, l);
      const double jp = J_p_plus[pr] * (c * sp.imag() - s * sp.real()) +
                        J_p_minus[pr] * (c * sp.imag() + s * sp.real());
      bc.flow(l, pr - 1) = jp;
      total += jp;
    }
    bc.Q_p[pr - 1] = omega_m * total;
    bc.Q_C += bc.Q_p[pr - 1];
  }
  return bc;
}

/// Coherent inter-site flow generated by a Hermitian coupling h at a given
/// correlation matrix: inflow(l, m) = 2 Im(h_{l,m} sigma_{l,m}) is the rate
/// at which quanta enter site l from site m. The value is invariant under
/// local gauge transformations applied jointly to h and sigma.
inline Eigen::MatrixXd pair_inflow(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& sigma) {
  const Eigen::Index L = h.rows();
  if (h.cols() != L || sigma.rows() != L || sigma.cols() != L)
    throw std::invalid_argument("pair_inflow: dimension mismatch");
  Eigen::MatrixXd p(L, L);
  for (Eigen::Index l = 0; l < L; ++l)
    for (Eigen::Index m = 0; m < L; ++m)
      p(l, m) = 2.0 * (h(l, m) * sigma(l, m)).imag();
  return p;
}

/// Side-by-side comparison of the eliminated k-space route against the full
/// linearized covariance on the same working point.
struct BenchmarkReport {
  Eigen::MatrixXcd sigma_mf;
  Eigen::MatrixXcd sigma_eff;
  double delta = 0.0;
  BondCurrents currents_mf;
  BondCurrents currents_eff;
};

inline BenchmarkReport compare_theories(const ModelParams& p, const MeanFieldSolution& mf) {
  BenchmarkReport rep;
  const RingSpectrum rs = ring_spectrum(p, mf);
  const CurrentReport cr = steady_state(p, mf);
  rep.sigma_eff = cr.sigma;

  CovarianceState st = build_linearized_system(p, mf);
  steady_covariance(st);
  rep.sigma_mf = sigma_mf(st);

  rep.delta = relative_error(rep.sigma_eff, rep.sigma_mf);
  const double om = p.omega_m[0];
  rep.currents_eff = current_from_sigma(rep.sigma_eff, rs.J_p_plus, rs.J_p_minus, rs.phi, om);
  rep.currents_mf = current_from_sigma(rep.sigma_mf, rs.J_p_plus, rs.J_p_minus, rs.phi, om);
  return rep;
}

}  // namespace optoring
