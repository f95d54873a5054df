// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optoring/errors.hpp"
#include "optoring/meanfield.hpp"
#include "optoring/model.hpp"

namespace optoring {

/// Closed k-space description of a uniform ring: hopping amplitudes J_p of
/// the photon-mediated phonon coupling, the dressed dispersion omega_k and
/// the per-mode damping and pumping rates on the Bloch grid k = 2 pi m / L.
struct RingSpectrum {
  int L = 0;
  double phi = 0.0;
  Eigen::VectorXd k_grid;
  Eigen::VectorXd J_p_plus;   ///< p = 0 .. L-1
  Eigen::VectorXd J_p_minus;  ///< p = 0 .. L-1
  Eigen::VectorXd omega_k;
  Eigen::VectorXd Gamma_down_k;
  Eigen::VectorXd Gamma_up_k;
  std::vector<bool> stable;
};

/// Steady state of the k-space description and the heat currents it
/// carries. Q_p is the circulating power through range-p bonds in units of
/// the mechanical quantum, Q_C their sum over 1 <= p < ceil(L/2), and sigma
/// the real-space one-body correlation matrix (Hermitian circulant).
struct CurrentReport {
  Eigen::VectorXd Q_p;  ///< entry i corresponds to p = i + 1
  double Q_C = 0.0;
  Eigen::VectorXd populations_k;
  Eigen::MatrixXcd sigma;
  Eigen::MatrixXcd g1;
  std::optional<double> delta_err;
  /// Modes whose population exceeds 1e6; the linearized description is
  /// about to break down there even though the mode is formally stable.
  std::vector<int> near_critical_k;
};

namespace detail {

inline int imod(long long v, int L) {
  const long long m = v % L;
  return static_cast<int>(m < 0 ? m + L : m);
}

/// Sums term(0), the mirror pairs term(m) + term(L-m) in ascending m, and
/// finally term(L/2) for even L. Keeping this order makes mirror-symmetric
/// inputs cancel or duplicate exactly in IEEE arithmetic, which is what the
/// exact gauge-parity guarantees of the ring route rest on.
template <class F>
double paired_sum(int L, F&& term) {
  double acc = term(0);
  for (int m = 1; 2 * m < L; ++m) acc += term(m) + term(L - m);
  if (L % 2 == 0 && L >= 2) acc += term(L / 2);
  return acc;
}

template <class F>
complexd paired_sum_c(int L, F&& term) {
  complexd acc = term(0);
  for (int m = 1; 2 * m < L; ++m) acc += term(m) + term(L - m);
  if (L % 2 == 0 && L >= 2) acc += term(L / 2);
  return acc;
}

/// Shared trigonometry and rate tables of a uniform ring working point.
/// Grid cosines and sines are stored once with the mirror symmetries
/// c[L-j] = c[j], s[L-j] = -s[j] enforced by construction, and every
/// commensurate-phase quantity is addressed through integer indices modulo
/// L, never through recomputed floating-point angles. Incommensurate phase
/// gradients fall back to direct evaluation without exactness guarantees.
struct RingTables {
  int L;
  double phi;
  std::optional<int> n;  ///< phi = 2 pi n / L when commensurate
  double G2, delta_tilde, J, gamma_c, omega_m, gamma_m, nbar;
  double hg2;  ///< (gamma_c / 2)^2
  std::vector<double> c, s;
  std::vector<double> Rp, Rm;  ///< sampled rate kernel at grid cosines
  std::vector<double> up, um;  ///< sampled dispersive kernel at grid cosines
  std::vector<double> Ap, Am;  ///< rate kernel at k + phi per Bloch index
  std::vector<double> Dp, Dm;  ///< dispersive kernel at k + phi and k - phi

  RingTables(int L_, double phi_, double G_mag, double delta_tilde_, double J_, double gamma_c_,
             double omega_m_, double gamma_m_ = 0.0, double nbar_ = 0.0)
      : L(L_),
        phi(phi_),
        n(phase_grid_index(phi_, L_)),
        G2(G_mag * G_mag),
        delta_tilde(delta_tilde_),
        J(J_),
        gamma_c(gamma_c_),
        omega_m(omega_m_),
        gamma_m(gamma_m_),
        nbar(nbar_) {
    if (L < 1) throw std::invalid_argument("ring tables: L must be >= 1");
    const double hg = 0.5 * gamma_c;
    hg2 = hg * hg;
    c.assign(static_cast<std::size_t>(L), 0.0);
    s.assign(static_cast<std::size_t>(L), 0.0);
    c[0] = 1.0;
    s[0] = 0.0;
    for (int j = 1; 2 * j < L; ++j) {
      const double a = two_pi * static_cast<double>(j) / static_cast<double>(L);
      c[static_cast<std::size_t>(j)] = std::cos(a);
      s[static_cast<std::size_t>(j)] = std::sin(a);
      c[static_cast<std::size_t>(L - j)] = c[static_cast<std::size_t>(j)];
      s[static_cast<std::size_t>(L - j)] = -s[static_cast<std::size_t>(j)];
    }
    if (L % 2 == 0 && L >= 2) {
      c[static_cast<std::size_t>(L / 2)] = -1.0;
      s[static_cast<std::size_t>(L / 2)] = 0.0;
    }

    Rp.resize(static_cast<std::size_t>(L));
    Rm.resize(static_cast<std::size_t>(L));
    up.resize(static_cast<std::size_t>(L));
    um.resize(static_cast<std::size_t>(L));
    for (int j = 0; j < L; ++j) {
      fill_kernels(+1.0, c[static_cast<std::size_t>(j)], Rp[static_cast<std::size_t>(j)],
                   up[static_cast<std::size_t>(j)]);
      fill_kernels(-1.0, c[static_cast<std::size_t>(j)], Rm[static_cast<std::size_t>(j)],
                   um[static_cast<std::size_t>(j)]);
    }

    Ap.resize(static_cast<std::size_t>(L));
    Am.resize(static_cast<std::size_t>(L));
    Dp.resize(static_cast<std::size_t>(L));
    Dm.resize(static_cast<std::size_t>(L));
    for (int m = 0; m < L; ++m) {
      if (n) {
        const int ip = imod(static_cast<long long>(m) + *n, L);
        const int im_ = imod(static_cast<long long>(m) - *n, L);
        Ap[static_cast<std::size_t>(m)] = Rp[static_cast<std::size_t>(ip)];
        Am[static_cast<std::size_t>(m)] = Rm[static_cast<std::size_t>(ip)];
        Dp[static_cast<std::size_t>(m)] = up[static_cast<std::size_t>(ip)];
        Dm[static_cast<std::size_t>(m)] = um[static_cast<std::size_t>(im_)];
      } else {
        const double k = two_pi * static_cast<double>(m) / static_cast<double>(L);
        double rp, dp, rm, dm;
        fill_kernels(+1.0, std::cos(k + phi), rp, dp);
        fill_kernels(-1.0, std::cos(k + phi), rm, dm);
        Ap[static_cast<std::size_t>(m)] = rp;
        Am[static_cast<std::size_t>(m)] = rm;
        Dp[static_cast<std::size_t>(m)] = dp;
        double r_unused, dmm;
        fill_kernels(-1.0, std::cos(k - phi), r_unused, dmm);
        Dm[static_cast<std::size_t>(m)] = dmm;
      }
    }
  }

  /// Lorentzian rate kernel R = G^2 gamma_c / (x^2 + (gamma_c/2)^2) and its
  /// dispersive partner u = G^2 x / (x^2 + (gamma_c/2)^2) at
  /// x = sign * omega_m + delta_tilde + J * cosk.
  void fill_kernels(double sign, double cosk, double& R, double& u) const {
    const double x = sign * omega_m + delta_tilde + J * cosk;
    const double d = x * x + hg2;
    R = G2 * gamma_c / d;
    u = G2 * x / d;
  }

  /// sin(p (k_m + sign * phi)) through the shared table when commensurate.
  double sin_p(int p, int m, int sign) const {
    if (n) {
      const long long idx = static_cast<long long>(p) * (static_cast<long long>(m) +
                                                         static_cast<long long>(sign) * *n);
      return s[static_cast<std::size_t>(imod(idx, L))];
    }
    const double k = two_pi * static_cast<double>(m) / static_cast<double>(L);
    return std::sin(static_cast<double>(p) * (k + static_cast<double>(sign) * phi));
  }

  double gamma_down(int m) const {
    return gamma_m * (nbar + 1.0) + Ap[static_cast<std::size_t>(m)];
  }
  double gamma_up(int m) const { return gamma_m * nbar + Am[static_cast<std::size_t>(m)]; }

  /// Net relaxation rate of mode m against the pump acting on it (the pump
  /// of mode k enters through the channel labeled -k). Written with the
  /// thermal parts cancelled algebraically so weak optical contributions
  /// are not lost to cancellation.
  double net_rate(int m) const {
    return gamma_m + Ap[static_cast<std::size_t>(m)] - Am[static_cast<std::size_t>(imod(-m, L))];
  }

  double pump_rate(int m) const {
    return gamma_m * nbar + Am[static_cast<std::size_t>(imod(-m, L))];
  }
};

}  // namespace detail

/// Phonon hopping amplitude mediated by the photon lattice, resolved by
/// bond range p: the inverse Bloch transform of the dispersive kernel,
///   J_p = (1/L) sum_k cos(k p) G^2 x_k / (x_k^2 + (gamma_c/2)^2),
/// x_k = sign * omega_m + delta_tilde + J cos k. Independent of the drive
/// gradient (the gradient only twists bond phases); identically real.
/// sign selects the kernel sampled at +omega_m (+1) or -omega_m (-1).
inline Eigen::VectorXd hopping_amplitudes(int L, double /*phi*/, double G_mag,
                                          double delta_tilde, double J, double gamma_c,
                                          double omega_m, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("hopping_amplitudes: sign must be +1 or -1");
  const detail::RingTables t(L, 0.0, G_mag, delta_tilde, J, gamma_c, omega_m);
  const std::vector<double>& u = (sign == 1) ? t.up : t.um;
  Eigen::VectorXd out(L);
  for (int p = 0; p < L; ++p) {
    const double acc = detail::paired_sum(L, [&](int m) {
      const int idx = detail::imod(static_cast<long long>(m) * p, L);
      return t.c[static_cast<std::size_t>(idx)] * u[static_cast<std::size_t>(m)];
    });
    out[p] = acc / static_cast<double>(L);
  }
  return out;
}

/// Optically induced damping (omega near +omega_m) or pumping (omega near
/// -omega_m) rate of Bloch mode k sampled at frequency omega:
///   Gamma_k(omega) = G^2 gamma_c / ((omega + J cos(k + phi) + delta_tilde)^2
///                                   + (gamma_c/2)^2).
/// Direct evaluation for arbitrary k and omega; the grid routines use the
/// shared tables instead.
inline double k_rate(double k, double omega, double phi, double G_mag, double delta_tilde,
                     double J, double gamma_c) {
  const double x = omega + J * std::cos(k + phi) + delta_tilde;
  return G_mag * G_mag * gamma_c / (x * x + 0.25 * gamma_c * gamma_c);
}

/// Dressed phonon dispersion on the Bloch grid,
///   omega_k = omega_m + u_+(k + phi) + u_-(k - phi),
/// where u_± is the dispersive kernel of the respective sideband.
inline Eigen::VectorXd dispersion(int L, double phi, double G_mag, double delta_tilde, double J,
                                  double gamma_c, double omega_m) {
  const detail::RingTables t(L, phi, G_mag, delta_tilde, J, gamma_c, omega_m);
  Eigen::VectorXd out(L);
  for (int m = 0; m < L; ++m)
    out[m] = omega_m + t.Dp[static_cast<std::size_t>(m)] + t.Dm[static_cast<std::size_t>(m)];
  return out;
}

/// Leading behaviour of the dispersion when both |omega_m + delta_tilde|
/// and J are small against gamma_c: omega_k is then
/// offset + amplitude * cos(k + phi) with amplitude = 4 G^2 J / gamma_c^2
/// > 0, so the band minimum sits at k = pi - phi, not at k = phi.
struct DispersionFirstOrder {
  double offset = 0.0;
  double cosine_amplitude = 0.0;
  double argmin_k = 0.0;  ///< wrapped to [0, 2 pi)
};

inline DispersionFirstOrder dispersion_first_order(double phi, double G_mag, double delta_tilde,
                                                   double J, double gamma_c, double omega_m) {
  DispersionFirstOrder d;
  const double G2 = G_mag * G_mag;
  const double hg2 = 0.25 * gamma_c * gamma_c;
  const double xm = -omega_m + delta_tilde;  // opposite sideband, far detuned
  d.offset = omega_m + 4.0 * G2 * (omega_m + delta_tilde) / (gamma_c * gamma_c) +
             G2 * xm / (xm * xm + hg2);
  d.cosine_amplitude = 4.0 * G2 * J / (gamma_c * gamma_c);
  const double pi = 0.5 * two_pi;
  double argmin = (d.cosine_amplitude >= 0.0) ? (pi - phi) : -phi;
  argmin = std::fmod(argmin, two_pi);
  if (argmin < 0.0) argmin += two_pi;
  d.argmin_k = argmin;
  return d;
}

struct RateSet {
  Eigen::VectorXd down;  ///< Gamma_k down, thermal plus optical
  Eigen::VectorXd up;    ///< Gamma_k up, thermal plus optical
};

/// Total damping and pumping rates per Bloch mode. The pump with label k
/// feeds mode -k; the stability predicate below accounts for that pairing.
inline RateSet effective_rates(int L, double phi, double G_mag, double delta_tilde, double J,
                               double gamma_c, double omega_m, double gamma_m, double nbar) {
  const detail::RingTables t(L, phi, G_mag, delta_tilde, J, gamma_c, omega_m, gamma_m, nbar);
  RateSet r;
  r.down.resize(L);
  r.up.resize(L);
  for (int m = 0; m < L; ++m) {
    r.down[m] = t.gamma_down(m);
    r.up[m] = t.gamma_up(m);
  }
  return r;
}

/// Pure stability predicate: mode m is stable when its damping exceeds the
/// pump feeding it, Gamma_down[m] > Gamma_up[(L - m) mod L].
inline std::vector<bool> stability(const Eigen::VectorXd& Gamma_down,
                                   const Eigen::VectorXd& Gamma_up) {
  const int L = static_cast<int>(Gamma_down.size());
  if (Gamma_up.size() != L) throw std::invalid_argument("stability: rate length mismatch");
  std::vector<bool> stable(static_cast<std::size_t>(L));
  for (int m = 0; m < L; ++m)
    stable[static_cast<std::size_t>(m)] = Gamma_down[m] > Gamma_up[detail::imod(-m, L)];
  return stable;
}

/// Current weights w_k of the circulating-power observable:
///   w_k = - sum_{1 <= p < ceil(L/2)} sum_± J_p^± sin(p (k ± phi)).
/// The antipodal range p = L/2 of an even ring carries no net orientation
/// and is excluded from the circulating sum by convention.
inline Eigen::VectorXd current_operator_coefficients(int L, double phi,
                                                     const Eigen::VectorXd& J_p_plus,
                                                     const Eigen::VectorXd& J_p_minus) {
  if (J_p_plus.size() != L || J_p_minus.size() != L)
    throw std::invalid_argument("current_operator_coefficients: J_p length mismatch");
  const detail::RingTables t(L, phi, 0.0, 0.0, 0.0, 1.0, 1.0);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(L);
  for (int m = 0; m < L; ++m) {
    double acc = 0.0;
    for (int p = 1; 2 * p < L; ++p)
      acc -= J_p_plus[p] * t.sin_p(p, m, +1) + J_p_minus[p] * t.sin_p(p, m, -1);
    w[m] = acc;
  }
  return w;
}

namespace detail {

/// Uniform scalar extraction for the k-space route. The route is exact for
/// translation-invariant rings only, so every per-site quantity must agree
/// across sites and the drive phases must follow the homogeneous gradient.
struct RingUniform {
  int L;
  double phi;
  double G_mag, delta_tilde, J, gamma_c, omega_m, gamma_m, nbar;
};

inline double uniform_value(const Eigen::VectorXd& v, const char* name) {
  const double v0 = v[0];
  for (Eigen::Index l = 1; l < v.size(); ++l)
    if (std::abs(v[l] - v0) > 1e-12 * std::max(1.0, std::abs(v0)))
      throw std::invalid_argument(std::string("ring route requires uniform ") + name);
  return v0;
}

inline RingUniform ring_uniform(const ModelParams& p, const MeanFieldSolution& mf) {
  if (p.lattice.topology_tag != Topology::ring)
    throw std::invalid_argument("ring route requires ring topology");
  const int L = p.lattice.L;
  if (L < 3 && p.J != 0.0)
    throw std::invalid_argument("ring route requires L >= 3 when J != 0");
  RingUniform u;
  u.L = L;
  u.phi = p.drive.phase_gradient;
  if (!p.drive.phases.empty())
    throw std::invalid_argument("ring route requires the homogeneous phase gradient");
  u.omega_m = uniform_value(p.omega_m, "omega_m");
  u.gamma_c = uniform_value(p.gamma_c, "gamma_c");
  u.gamma_m = uniform_value(p.gamma_m, "gamma_m");
  u.nbar = uniform_value(p.nbar, "nbar");
  u.delta_tilde = uniform_value(mf.delta_tilde, "delta_tilde");
  u.J = p.J;
  const double g0 = std::abs(mf.G[0]);
  for (int l = 0; l < L; ++l)
    if (std::abs(std::abs(mf.G[l]) - g0) > 1e-12 * std::max(1.0, g0))
      throw std::invalid_argument("ring route requires uniform |G|");
  u.G_mag = g0;
  if (g0 > 0.0) {
    for (int l = 0; l + 1 < L; ++l) {
      const double step = std::arg(mf.G[l + 1] * std::conj(mf.G[l]));
      double diff = std::fmod(step - u.phi, two_pi);
      if (diff > 0.5 * two_pi) diff -= two_pi;
      if (diff < -0.5 * two_pi) diff += two_pi;
      if (std::abs(diff) > 1e-8)
        throw std::invalid_argument("ring route requires G phases following the drive gradient");
    }
  }
  return u;
}

}  // namespace detail

/// Full k-space spectrum of a uniform ring working point.
inline RingSpectrum ring_spectrum(const ModelParams& p, const MeanFieldSolution& mf) {
  const detail::RingUniform u = detail::ring_uniform(p, mf);
  const detail::RingTables t(u.L, u.phi, u.G_mag, u.delta_tilde, u.J, u.gamma_c, u.omega_m,
                             u.gamma_m, u.nbar);
  RingSpectrum rs;
  rs.L = u.L;
  rs.phi = u.phi;
  rs.k_grid.resize(u.L);
  for (int m = 0; m < u.L; ++m)
    rs.k_grid[m] = two_pi * static_cast<double>(m) / static_cast<double>(u.L);
  rs.J_p_plus = hopping_amplitudes(u.L, u.phi, u.G_mag, u.delta_tilde, u.J, u.gamma_c, u.omega_m, +1);
  rs.J_p_minus = hopping_amplitudes(u.L, u.phi, u.G_mag, u.delta_tilde, u.J, u.gamma_c, u.omega_m, -1);
  rs.omega_k.resize(u.L);
  rs.Gamma_down_k.resize(u.L);
  rs.Gamma_up_k.resize(u.L);
  for (int m = 0; m < u.L; ++m) {
    rs.omega_k[m] = u.omega_m + t.Dp[static_cast<std::size_t>(m)] + t.Dm[static_cast<std::size_t>(m)];
    rs.Gamma_down_k[m] = t.gamma_down(m);
    rs.Gamma_up_k[m] = t.gamma_up(m);
  }
  rs.stable = stability(rs.Gamma_down_k, rs.Gamma_up_k);
  return rs;
}

/// Steady state of the uniform-ring description. Refuses with
/// instability_error (naming the unstable Bloch indices) when any mode has
/// no steady population. Populations use the cancellation-free form
///   n_k = pump_k / (gamma_m + A_+[k] - A_-[-k]),
/// so the thermal limit g = 0 returns nbar to machine accuracy. sigma and
/// the currents are assembled with mirror-paired sums over the Bloch grid;
/// for commensurate gradients this makes sigma exactly Hermitian circulant,
/// Q_C(phi = 0) = 0 and Q_C(-phi) = -Q_C(phi) bitwise.
inline CurrentReport steady_state(const ModelParams& p, const MeanFieldSolution& mf) {
  const detail::RingUniform u = detail::ring_uniform(p, mf);
  const int L = u.L;
  const detail::RingTables t(L, u.phi, u.G_mag, u.delta_tilde, u.J, u.gamma_c, u.omega_m,
                             u.gamma_m, u.nbar);

  std::vector<int> unstable;
  for (int m = 0; m < L; ++m)
    if (!(t.gamma_down(m) > t.gamma_up(detail::imod(-m, L)))) unstable.push_back(m);
  if (!unstable.empty()) {
    std::string msg = "steady_state: no steady state, unstable Bloch indices:";
    for (int m : unstable) msg += " " + std::to_string(m);
    throw instability_error(msg, unstable);
  }

  CurrentReport rep;
  rep.populations_k.resize(L);
  for (int m = 0; m < L; ++m) {
    rep.populations_k[m] = t.pump_rate(m) / t.net_rate(m);
    if (rep.populations_k[m] > 1e6) rep.near_critical_k.push_back(m);
  }

  const Eigen::VectorXd Jpp =
      hopping_amplitudes(L, u.phi, u.G_mag, u.delta_tilde, u.J, u.gamma_c, u.omega_m, +1);
  const Eigen::VectorXd Jpm =
      hopping_amplitudes(L, u.phi, u.G_mag, u.delta_tilde, u.J, u.gamma_c, u.omega_m, -1);

  const int p_count = (L + 1) / 2 - 1;
  rep.Q_p.resize(std::max(p_count, 0));
  rep.Q_C = 0.0;
  for (int pr = 1; pr <= p_count; ++pr) {
    const double flow = detail::paired_sum(L, [&](int m) {
      return -(Jpp[pr] * t.sin_p(pr, m, +1) + Jpm[pr] * t.sin_p(pr, m, -1)) *
             rep.populations_k[m];
    });
    rep.Q_p[pr - 1] = u.omega_m * flow;
    rep.Q_C += rep.Q_p[pr - 1];
  }

  // sigma depends on l - l' only; one inverse transform per separation.
  std::vector<complexd> sigma_delta(static_cast<std::size_t>(L));
  for (int d = 0; d < L; ++d) {
    const complexd acc = detail::paired_sum_c(L, [&](int m) {
      const int idx = detail::imod(static_cast<long long>(m) * d, L);
      return complexd(t.c[static_cast<std::size_t>(idx)], -t.s[static_cast<std::size_t>(idx)]) *
             rep.populations_k[m];
    });
    sigma_delta[static_cast<std::size_t>(d)] = acc / static_cast<double>(L);
  }
  rep.sigma.resize(L, L);
  for (int l = 0; l < L; ++l)
    for (int m = 0; m < L; ++m)
      rep.sigma(l, m) = sigma_delta[static_cast<std::size_t>(detail::imod(l - m, L))];

  rep.g1.resize(L, L);
  for (int l = 0; l < L; ++l) {
    const double dl = rep.sigma(l, l).real();
    for (int m = 0; m < L; ++m) {
      if (l == m) {
        rep.g1(l, m) = (dl > 0.0) ? 1.0 : 0.0;
      } else {
        const double dm = rep.sigma(m, m).real();
        rep.g1(l, m) = (dl > 0.0 && dm > 0.0)
                           ? rep.sigma(l, m) / (std::sqrt(dl) * std::sqrt(dm))
                           : complexd(0.0, 0.0);
      }
    }
  }
  return rep;
}

}  // namespace optoring
