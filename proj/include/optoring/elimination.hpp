// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "optoring/errors.hpp"
#include "optoring/meanfield.hpp"
#include "optoring/model.hpp"

namespace optoring {

/// Non-Hermitian single-photon generator of the driven lossy lattice,
/// B = -(J/2) A - Diag(delta_tilde + i gamma_c / 2).
/// Its eigenvalues under -iB all have real part <= -min(gamma_c)/2, so the
/// photon sector relaxes on its own and can be eliminated.
struct PhotonGenerator {
  Eigen::MatrixXcd B;
};

inline PhotonGenerator build_generator(const Eigen::MatrixXi& adjacency, double J,
                                       const Eigen::VectorXd& delta_tilde,
                                       const Eigen::VectorXd& gamma_c) {
  const Eigen::Index L = delta_tilde.size();
  if (adjacency.rows() != L || adjacency.cols() != L || gamma_c.size() != L)
    throw std::invalid_argument("build_generator: dimension mismatch");
  PhotonGenerator gen;
  gen.B = Eigen::MatrixXcd::Zero(L, L);
  for (Eigen::Index l = 0; l < L; ++l) {
    gen.B(l, l) = complexd(-delta_tilde[l], -0.5 * gamma_c[l]);
    for (Eigen::Index m = 0; m < L; ++m)
      if (adjacency(l, m) != 0) gen.B(l, m) -= 0.5 * J;
  }
  return gen;
}

inline PhotonGenerator build_generator(const ModelParams& p, const MeanFieldSolution& mf) {
  return build_generator(p.lattice.adjacency, p.J, mf.delta_tilde, p.gamma_c);
}

namespace detail {

/// Inverse of (omega I - B) with an explicit invertibility gate. The full
/// pivoting keeps the singularity decision deterministic.
inline Eigen::MatrixXcd resolvent_inverse(const Eigen::MatrixXcd& B, double omega) {
  const Eigen::Index L = B.rows();
  Eigen::MatrixXcd shifted = -B;
  for (Eigen::Index l = 0; l < L; ++l) shifted(l, l) += omega;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(shifted);
  if (!lu.isInvertible())
    throw std::domain_error("resolvent is singular at the requested frequency");
  return lu.inverse();
}

/// Exact Hermitian combinations. Entrywise conjugation, negation and
/// halving are exact in IEEE arithmetic, so the results are Hermitian
/// bitwise, not merely to rounding.
inline Eigen::MatrixXcd hermitian_sum(const Eigen::MatrixXcd& S) { return S + S.adjoint(); }

inline Eigen::MatrixXcd hermitian_flow(const Eigen::MatrixXcd& S) {
  return (S - S.adjoint()) * complexd(0.0, -0.5);
}

}  // namespace detail

/// Reservoir kernel sampled at a single frequency,
/// S(omega)_{l,m} = conj(G_l) [i (omega I - B)^{-1}]_{l,m} G_m.
/// G = 0 gives the zero matrix; a singular resolvent raises
/// std::domain_error.
inline Eigen::MatrixXcd reservoir_spectrum_at(const PhotonGenerator& gen,
                                              const Eigen::VectorXcd& G, double omega) {
  const Eigen::Index L = gen.B.rows();
  if (G.size() != L) throw std::invalid_argument("reservoir_spectrum_at: G length mismatch");
  const Eigen::MatrixXcd R = detail::resolvent_inverse(gen.B, omega);
  Eigen::MatrixXcd S(L, L);
  for (Eigen::Index l = 0; l < L; ++l)
    for (Eigen::Index m = 0; m < L; ++m)
      S(l, m) = std::conj(G[l]) * (complexd(0.0, 1.0) * R(l, m)) * G[m];
  return S;
}

/// One decomposed reservoir kernel: coherent part Omega = (S - S^dag) / 2i,
/// rates Gamma and mode matrix U with U (S + S^dag) U^dag = Diag(Gamma).
/// Rows of U define collective modes as U-weighted sums of the local ones.
struct SpectrumDecomposition {
  Eigen::MatrixXcd Omega;
  Eigen::VectorXd Gamma;  ///< descending
  Eigen::MatrixXcd U;     ///< unitary, rows are mode weights
};

/// Splits a kernel into its coherent and dissipative parts and diagonalizes
/// the latter. Gamma is sorted descending; exact ties are ordered by a
/// lexicographic comparison of the (phase-normalized) eigenvectors so the
/// output is a pure function of S. Each eigenvector is rescaled so its
/// largest-magnitude component is real and positive.
inline SpectrumDecomposition decompose_spectrum(const Eigen::MatrixXcd& S) {
  const Eigen::Index L = S.rows();
  if (S.cols() != L) throw std::invalid_argument("decompose_spectrum: S must be square");
  SpectrumDecomposition dec;
  dec.Omega = detail::hermitian_flow(S);
  const Eigen::MatrixXcd H = detail::hermitian_sum(S);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success)
    throw numerical_error("decompose_spectrum: eigensolver failed");

  std::vector<Eigen::VectorXcd> vecs(static_cast<std::size_t>(L));
  for (Eigen::Index i = 0; i < L; ++i) {
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < L; ++j) {
      const double a = std::abs(v[j]);
      if (a > best + 1e-12) {
        best = a;
        pivot = j;
      }
    }
    const double mag = std::abs(v[pivot]);
    if (mag > 0.0) v *= std::conj(v[pivot]) / mag;
    vecs[static_cast<std::size_t>(i)] = std::move(v);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(L));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ea = es.eigenvalues()[a];
    const double eb = es.eigenvalues()[b];
    if (ea != eb) return ea > eb;
    const auto& va = vecs[static_cast<std::size_t>(a)];
    const auto& vb = vecs[static_cast<std::size_t>(b)];
    for (Eigen::Index j = 0; j < L; ++j) {
      if (va[j].real() != vb[j].real()) return va[j].real() < vb[j].real();
      if (va[j].imag() != vb[j].imag()) return va[j].imag() < vb[j].imag();
    }
    return false;
  });

  dec.Gamma.resize(L);
  dec.U.resize(L, L);
  for (Eigen::Index i = 0; i < L; ++i) {
    dec.Gamma[i] = es.eigenvalues()[order[static_cast<std::size_t>(i)]];
    dec.U.row(i) = vecs[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])].adjoint();
  }
  return dec;
}

/// Both reservoir kernels of the eliminated photon lattice. S_plus is the
/// kernel through which phonons decay (sampled at +omega_m, column-wise when
/// the mechanical frequencies differ) and S_minus the kernel through which
/// they are pumped (sampled at -omega_m).
struct ReservoirSpectrum {
  Eigen::MatrixXcd S_plus;
  Eigen::MatrixXcd S_minus;
  Eigen::MatrixXcd Omega_plus;
  Eigen::MatrixXcd Omega_minus;
  Eigen::VectorXd Gamma_plus;
  Eigen::VectorXd Gamma_minus;
  Eigen::MatrixXcd U_plus;
  Eigen::MatrixXcd U_minus;
};

namespace detail {

/// Kernel with a per-column sampling frequency: column m uses the resolvent
/// at omega[m]. Columns sharing a frequency share one factorization.
inline Eigen::MatrixXcd columnwise_spectrum(const Eigen::MatrixXcd& B,
                                            const Eigen::VectorXcd& G,
                                            const Eigen::VectorXd& omega) {
  const Eigen::Index L = B.rows();
  Eigen::MatrixXcd S(L, L);
  std::map<double, Eigen::MatrixXcd> cache;
  for (Eigen::Index m = 0; m < L; ++m) {
    auto it = cache.find(omega[m]);
    if (it == cache.end()) it = cache.emplace(omega[m], resolvent_inverse(B, omega[m])).first;
    const Eigen::MatrixXcd& R = it->second;
    for (Eigen::Index l = 0; l < L; ++l)
      S(l, m) = std::conj(G[l]) * (complexd(0.0, 1.0) * R(l, m)) * G[m];
  }
  return S;
}

}  // namespace detail

inline ReservoirSpectrum reservoir_spectra(const PhotonGenerator& gen, const Eigen::VectorXcd& G,
                                           const Eigen::VectorXd& omega_m) {
  const Eigen::Index L = gen.B.rows();
  if (G.size() != L || omega_m.size() != L)
    throw std::invalid_argument("reservoir_spectra: dimension mismatch");
  ReservoirSpectrum rs;
  rs.S_plus = detail::columnwise_spectrum(gen.B, G, omega_m);
  rs.S_minus = detail::columnwise_spectrum(gen.B, G, -omega_m);
  SpectrumDecomposition dp = decompose_spectrum(rs.S_plus);
  SpectrumDecomposition dm = decompose_spectrum(rs.S_minus);
  rs.Omega_plus = std::move(dp.Omega);
  rs.Gamma_plus = std::move(dp.Gamma);
  rs.U_plus = std::move(dp.U);
  rs.Omega_minus = std::move(dm.Omega);
  rs.Gamma_minus = std::move(dm.Gamma);
  rs.U_minus = std::move(dm.U);
  return rs;
}

/// One collective jump channel: a rate and the site weights of the mode the
/// jump acts on. Down channels annihilate the weighted phonon mode, up
/// channels create the weighted conjugate mode.
struct JumpChannel {
  double rate = 0.0;
  Eigen::VectorXcd weights;
};

struct ThermalRates {
  Eigen::VectorXd down;  ///< gamma_m (nbar + 1) per site
  Eigen::VectorXd up;    ///< gamma_m nbar per site
};

/// Markovian phonon-only generator left after eliminating the photons:
/// coherent hopping matrix h (Hermitian, indirect phonon-phonon coupling
/// through the photon lattice), collective emission and absorption channels,
/// and the untouched local thermal channels.
struct EffectiveLiouvillian {
  Eigen::MatrixXcd h;
  Eigen::VectorXd omega_m;
  ThermalRates thermal_rates;
  std::vector<JumpChannel> down_channels;
  std::vector<JumpChannel> up_channels;
};

/// Builds the phonon-only generator from a working point. The coherent part
/// combines both kernels, h = Omega_plus + Omega_minus^T, and the collective
/// channels are the decompositions of the two dissipative kernels. All
/// collective rates are nonnegative up to roundoff (each dissipative kernel
/// is a Gram form).
inline EffectiveLiouvillian effective_liouvillian(const ModelParams& p,
                                                  const MeanFieldSolution& mf) {
  const int L = p.lattice.L;
  const PhotonGenerator gen = build_generator(p, mf);
  const ReservoirSpectrum rs = reservoir_spectra(gen, mf.G, p.omega_m);

  EffectiveLiouvillian lv;
  lv.h = rs.Omega_plus + rs.Omega_minus.transpose();
  lv.omega_m = p.omega_m;
  lv.thermal_rates.down = p.gamma_m.cwiseProduct(p.nbar + Eigen::VectorXd::Ones(L));
  lv.thermal_rates.up = p.gamma_m.cwiseProduct(p.nbar);
  lv.down_channels.reserve(static_cast<std::size_t>(L));
  lv.up_channels.reserve(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    lv.down_channels.push_back({rs.Gamma_plus[l], rs.U_plus.row(l).transpose()});
    lv.up_channels.push_back({rs.Gamma_minus[l], rs.U_minus.row(l).transpose()});
  }
  return lv;
}

/// Dissipative kernels reassembled from the channels of a generator:
/// sum over channels of rate * conj(w) w^T. Equals S + S^dag of the
/// corresponding reservoir kernel up to roundoff.
inline Eigen::MatrixXcd down_kernel(const EffectiveLiouvillian& lv) {
  const Eigen::Index L = lv.h.rows();
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(L, L);
  for (const auto& ch : lv.down_channels)
    K += ch.rate * (ch.weights.conjugate() * ch.weights.transpose());
  return K;
}

inline Eigen::MatrixXcd up_kernel(const EffectiveLiouvillian& lv) {
  const Eigen::Index L = lv.h.rows();
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(L, L);
  for (const auto& ch : lv.up_channels)
    K += ch.rate * (ch.weights.conjugate() * ch.weights.transpose());
  return K;
}

/// Time derivative of the one-body correlation matrix sigma_{l,m} =
/// <d_l^dag d_m> under the phonon-only generator. With H = h + Diag(omega_m),
/// Kd and Ku the dissipative kernels plus the diagonal thermal rates:
///   d sigma / dt = i [H^T, sigma] - {Kd^T, sigma}/2 + {Ku, sigma}/2 + Ku.
/// Vanishing at a claimed steady state is a closed consistency check that
/// involves nothing of the k-space route.
inline Eigen::MatrixXcd sigma_time_derivative(const EffectiveLiouvillian& lv,
                                              const Eigen::MatrixXcd& sigma) {
  const Eigen::Index L = lv.h.rows();
  if (sigma.rows() != L || sigma.cols() != L)
    throw std::invalid_argument("sigma_time_derivative: sigma dimension mismatch");
  Eigen::MatrixXcd H = lv.h;
  for (Eigen::Index l = 0; l < L; ++l) H(l, l) += lv.omega_m[l];
  Eigen::MatrixXcd Kd = down_kernel(lv);
  Eigen::MatrixXcd Ku = up_kernel(lv);
  for (Eigen::Index l = 0; l < L; ++l) {
    Kd(l, l) += lv.thermal_rates.down[l];
    Ku(l, l) += lv.thermal_rates.up[l];
  }
  const Eigen::MatrixXcd Ht = H.transpose();
  const Eigen::MatrixXcd KdT = Kd.transpose();
  return complexd(0.0, 1.0) * (Ht * sigma - sigma * Ht) -
         0.5 * (KdT * sigma + sigma * KdT) + 0.5 * (Ku * sigma + sigma * Ku) + Ku;
}

/// Photon kernel computed from first-principles correlation data instead of
/// the closed resolvent form: S(omega) = T^T [i (omega I - B)^{-1}] C0 T for
/// a coupling matrix T and an equal-time photon covariance C0. With vacuum
/// covariance and a diagonal real coupling this reduces to
/// reservoir_spectrum_at, which gives an independent route to the kernel.
inline Eigen::MatrixXcd spectrum_from_covariance(const PhotonGenerator& gen,
                                                 const Eigen::MatrixXcd& T,
                                                 const Eigen::MatrixXcd& C0, double omega) {
  const Eigen::Index L = gen.B.rows();
  if (T.rows() != L || T.cols() != L || C0.rows() != L || C0.cols() != L)
    throw std::invalid_argument("spectrum_from_covariance: dimension mismatch");
  const Eigen::MatrixXcd R = detail::resolvent_inverse(gen.B, omega);
  return T.transpose() * (complexd(0.0, 1.0) * R) * C0 * T;
}

/// Effective phonon model under two-tone driving. A red and a blue drive
/// component with site-independent magnitudes G_minus > G_plus >= 0 and
/// site phases varphi_l, theta_l squeeze the local modes with parameter r,
/// tanh r = G_plus / G_minus, turning the eliminated photon kernel Omega
/// into beam-splitter and pairing couplings between the squeezed modes.
struct SqueezedEffectiveModel {
  Eigen::VectorXcd G_plus;
  Eigen::VectorXcd G_minus;
  double r = 0.0;
  double eta = 0.0;  ///< sqrt(G_minus^2 - G_plus^2), the kernel scale
  Eigen::VectorXd theta;
  Eigen::VectorXd varphi;
  Eigen::MatrixXcd Omega;
  Eigen::MatrixXcd beamsplitter_coeffs;  ///< Hermitian
  Eigen::MatrixXcd pairing_coeffs;       ///< symmetric; entries for l != m
                                         ///< are coefficients of the pair sum
                                         ///< over both orderings
  double nu = 0.0;                       ///< theta[0] - varphi[0]
};

/// Builds the squeezed effective model from the photon generator at zero
/// sampling frequency. Magnitudes must be uniform across sites; requires
/// G_minus > G_plus (the squeezing transform degenerates at equality).
inline SqueezedEffectiveModel two_tone_squeezing_model(const PhotonGenerator& gen,
                                                       const Eigen::VectorXcd& G_plus,
                                                       const Eigen::VectorXcd& G_minus) {
  const Eigen::Index L = gen.B.rows();
  if (G_plus.size() != L || G_minus.size() != L)
    throw std::invalid_argument("two_tone_squeezing_model: dimension mismatch");
  const double gp = std::abs(G_plus[0]);
  const double gm = std::abs(G_minus[0]);
  for (Eigen::Index l = 0; l < L; ++l) {
    if (std::abs(std::abs(G_plus[l]) - gp) > 1e-12 * std::max(1.0, gp) ||
        std::abs(std::abs(G_minus[l]) - gm) > 1e-12 * std::max(1.0, gm))
      throw std::invalid_argument("two_tone_squeezing_model: tone magnitudes must be uniform");
  }
  if (!(gm > gp))
    throw std::domain_error("two_tone_squeezing_model: requires |G_minus| > |G_plus|");

  SqueezedEffectiveModel m;
  m.G_plus = G_plus;
  m.G_minus = G_minus;
  m.eta = std::sqrt(gm * gm - gp * gp);
  m.r = std::atanh(gp / gm);
  const double ch = gm / m.eta;
  const double sh = gp / m.eta;
  m.theta.resize(L);
  m.varphi.resize(L);
  for (Eigen::Index l = 0; l < L; ++l) {
    m.theta[l] = std::arg(G_plus[l]);
    m.varphi[l] = std::arg(G_minus[l]);
  }
  m.nu = m.theta[0] - m.varphi[0];

  const Eigen::VectorXcd eta_vec = Eigen::VectorXcd::Constant(L, complexd(m.eta, 0.0));
  const Eigen::MatrixXcd S = reservoir_spectrum_at(gen, eta_vec, 0.0);
  m.Omega = detail::hermitian_flow(S);

  m.beamsplitter_coeffs.resize(L, L);
  m.pairing_coeffs.resize(L, L);
  auto cis = [](double x) { return complexd(std::cos(x), std::sin(x)); };
  for (Eigen::Index i = 0; i < L; ++i) {
    for (Eigen::Index j = 0; j < L; ++j) {
      const double mag = std::abs(m.Omega(i, j));
      const double alpha = std::arg(m.Omega(i, j));
      const double th_d = 0.5 * (m.theta[i] - m.theta[j]);
      const double ph_d = 0.5 * (m.varphi[i] - m.varphi[j]);
      const double th_s = 0.5 * (m.theta[i] + m.theta[j]);
      const double ph_s = 0.5 * (m.varphi[i] + m.varphi[j]);
      m.beamsplitter_coeffs(i, j) =
          2.0 * mag *
          (sh * sh * std::cos(ph_d + th_d - alpha) * cis(ph_d - th_d) +
           0.5 * cis(alpha - m.theta[i] + m.theta[j]));
      if (i == j) {
        // Squeezing each local mode maps its own decay channel onto a single
        // self-pairing term; the two-index formula double counts it.
        m.pairing_coeffs(i, i) = m.Omega(i, i) * ch * sh * cis(m.varphi[i] - m.theta[i]);
      } else {
        m.pairing_coeffs(i, j) =
            2.0 * mag * cis(th_s - ph_s) * ch * sh * std::cos(th_d + ph_d - alpha);
      }
    }
  }
  return m;
}

/// Tone phases that make every nearest-neighbour coupling real positive in
/// the beam-splitter channel: theta accumulates the kernel phases along the
/// chain 0 -> 1 -> ... and varphi trails theta by a fixed offset nu.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> phase_matched_phases(
    const Eigen::MatrixXcd& Omega, double nu) {
  const Eigen::Index L = Omega.rows();
  Eigen::VectorXd theta(L), varphi(L);
  theta[0] = 0.0;
  for (Eigen::Index l = 0; l + 1 < L; ++l)
    theta[l + 1] = theta[l] + std::arg(Omega(l + 1, l));
  for (Eigen::Index l = 0; l < L; ++l) varphi[l] = theta[l] - nu;
  return {theta, varphi};
}

}  // namespace optoring
