// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate. Each numbered criterion prints exactly one PASS/FAIL
// line; the process exit code is the number of failed criteria. Tolerances
// are pinned here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "optoring/optoring.hpp"

using namespace optoring;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances.
constexpr double kDeltaAtRatio1Lo = 0.005;
constexpr double kDeltaAtRatio1Hi = 0.015;
constexpr double kDeltaAtRatio5Lo = 0.0035;
constexpr double kDeltaAtRatio5Hi = 0.0105;
constexpr double kSecondsPerPoint = 1.0;
constexpr double kSecondsGridTotal = 120.0;
constexpr double kCurrentAgreeRel = 0.10;
constexpr double kCurrentAgreeAbsFloor = 1e-6;  // in units of omega_m * gamma_m
constexpr double kDualRouteTol = 1e-10;
constexpr double kSymmetryTol = 1e-12;
constexpr double kParsevalTol = 1e-12;
constexpr double kLyapunovResidTol = 1e-10;  // relative to max |D|
constexpr double kCommutatorTol = 1e-10;
constexpr double kPsdFloor = -1e-10;
constexpr double kZeroPairingTol = 1e-14;
constexpr double kClosedFormTol = 1e-12;
constexpr double kMarginalRate = 1e-9;  // stability margins below this are inconclusive

int g_failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
              detail.empty() ? "" : " | ", detail.c_str());
  if (!ok) ++g_failures;
}

void run_criterion(int index, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(index, name, ok, detail);
  } catch (const std::exception& e) {
    report(index, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

/// Uniform ring working point with prescribed drive amplitude 10 and unit
/// mechanical frequency. The detuning argument is the dressed value; the
/// bare one is recovered by inverting the static mean-field shift.
ModelParams ring_point(int L, double delta_tilde, double J, double phi, double g, double gamma_c,
                       double gamma_m, double nbar) {
  ModelParams p;
  p.lattice = build_ring(L);
  p.omega_m = Eigen::VectorXd::Constant(L, 1.0);
  p.g = Eigen::VectorXd::Constant(L, g);
  p.J = J;
  p.gamma_c = Eigen::VectorXd::Constant(L, gamma_c);
  p.gamma_m = Eigen::VectorXd::Constant(L, gamma_m);
  p.nbar = Eigen::VectorXd::Constant(L, nbar);
  p.drive.mode = DriveMode::alpha_prescribed;
  p.drive.alpha_magnitude = 10.0;
  p.drive.phase_gradient = phi;
  p.delta = Eigen::VectorXd::Constant(L, delta_tilde - 2.0 * g * g * 100.0 / 1.0);
  return p;
}

void set_dressed_detuning(ModelParams& p, double delta_tilde) {
  const double a2 = p.drive.alpha_magnitude * p.drive.alpha_magnitude;
  for (int l = 0; l < p.lattice.L; ++l)
    p.delta[l] = delta_tilde - 2.0 * p.g[l] * p.g[l] * a2 / p.omega_m[l];
}

/// Cross-validation point: L = 8, winding 2, red-detuned to the lower band
/// edge, nbar = 10, with the linearized coupling at one tenth of the photon
/// linewidth. The reference two-route errors correspond to this coupling.
ModelParams crosscheck_point(double ratio) {
  const double J = ratio * 0.1;
  return ring_point(8, -J - 1.0, J, 2.0 * two_pi / 8.0, 1e-3, 0.1, 1e-3, 10.0);
}

/// Main weak-coupling parameter set: g = 2e-3, nbar = 100, winding 1.
ModelParams weak_point(double delta_tilde, double ratio) {
  return ring_point(8, delta_tilde, ratio * 0.1, two_pi / 8.0, 2e-3, 0.1, 1e-3, 100.0);
}

bool all_stable(const RingSpectrum& rs) {
  for (bool s : rs.stable)
    if (!s) return false;
  return true;
}

/// Worst mismatch between the analytic k-space currents and the real-space
/// currents carried by the same correlation matrix, relative to the current
/// scale of the point. Symmetry-protected points carry currents that are
/// identically zero, so the scale never drops below one thermal decoherence
/// quantum omega_m * gamma_m; roundoff on an exact zero is not a violation.
double parseval_mismatch(const CurrentReport& kspace, const BondCurrents& realspace,
                         double floor_scale) {
  double scale = std::abs(kspace.Q_C);
  for (int i = 0; i < kspace.Q_p.size(); ++i) scale = std::max(scale, std::abs(kspace.Q_p[i]));
  scale = std::max(scale, floor_scale);
  double worst = std::abs(kspace.Q_C - realspace.Q_C) / scale;
  for (int i = 0; i < kspace.Q_p.size(); ++i)
    worst = std::max(worst, std::abs(kspace.Q_p[i] - realspace.Q_p[i]) / scale);
  return worst;
}

struct RidgeResult {
  double delta_tilde = 0.0;
  CurrentReport rep;
};

/// Detuning of maximal |Q_C| near the red band edge for one hopping ratio.
std::optional<RidgeResult> ridge_scan(double ratio) {
  ModelParams p = weak_point(-1.0, ratio);
  const double center = -1.0 - p.J;
  std::optional<RidgeResult> best;
  for (double dt = center - 0.5; dt <= center + 0.5 + 1e-12; dt += 0.002) {
    set_dressed_detuning(p, dt);
    const MeanFieldSolution mf = solve_mean_field(p);
    try {
      CurrentReport rep = steady_state(p, mf);
      if (!best || std::abs(rep.Q_C) > std::abs(best->rep.Q_C))
        best = RidgeResult{dt, std::move(rep)};
    } catch (const instability_error&) {
    }
  }
  return best;
}

std::pair<bool, std::string> criterion_1() {
  std::ostringstream detail;
  bool ok = true;
  const double lo[2] = {kDeltaAtRatio1Lo, kDeltaAtRatio5Lo};
  const double hi[2] = {kDeltaAtRatio1Hi, kDeltaAtRatio5Hi};
  const double ratios[2] = {1.0, 5.0};
  for (int i = 0; i < 2; ++i) {
    const ModelParams p = crosscheck_point(ratios[i]);
    const auto t0 = Clock::now();
    const MeanFieldSolution mf = solve_mean_field(p);
    const BenchmarkReport rep = compare_theories(p, mf);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_band = rep.delta >= lo[i] && rep.delta <= hi[i];
    const bool in_time = secs < kSecondsPerPoint;
    ok = ok && in_band && in_time;
    if (i) detail << ", ";
    detail << "J/gamma_c=" << ratios[i] << ": delta=" << fmt(rep.delta) << " in ["
           << fmt(lo[i]) << "," << fmt(hi[i]) << "]" << (in_band ? "" : " VIOLATED") << ", "
           << fmt(secs) << "s" << (in_time ? "" : " OVER BUDGET");
  }
  return {ok, detail.str()};
}

// Criteria 2 and 5 share the grid sweep; the Parseval identity is checked
// on every stable run of this gate.
double g_worst_parseval = 0.0;
int g_parseval_runs = 0;

void track_parseval(const CurrentReport& kspace, const BondCurrents& realspace,
                    double floor_scale) {
  g_worst_parseval = std::max(g_worst_parseval, parseval_mismatch(kspace, realspace, floor_scale));
  ++g_parseval_runs;
}

std::pair<bool, std::string> criterion_2() {
  const auto t0 = Clock::now();
  const std::vector<double> ratios = linspace(0.25, 4.0, 10);
  const std::vector<double> detunings = linspace(-2.5, 2.5, 10);
  int compared = 0;
  int skipped = 0;
  double worst = 0.0;
  std::string worst_where;
  for (double r : ratios) {
    for (double dt : detunings) {
      const ModelParams p = weak_point(dt, r);
      const MeanFieldSolution mf = solve_mean_field(p);
      try {
        const BenchmarkReport rep = compare_theories(p, mf);
        const CurrentReport kspace = steady_state(p, mf);
        track_parseval(kspace, rep.currents_eff, p.omega_m[0] * p.gamma_m[0]);
        const double q_eff = rep.currents_eff.Q_C;
        const double q_mf = rep.currents_mf.Q_C;
        const double allowed = std::max(kCurrentAgreeRel * std::max(std::abs(q_eff), std::abs(q_mf)),
                                        kCurrentAgreeAbsFloor * 1.0 * 1e-3);
        const double excess = std::abs(q_eff - q_mf) / allowed;
        if (excess > worst) {
          worst = excess;
          worst_where = "J/gamma_c=" + fmt(r) + ", delta_tilde=" + fmt(dt) + ", Q_eff=" +
                        fmt(q_eff) + ", Q_mf=" + fmt(q_mf);
        }
        ++compared;
      } catch (const instability_error&) {
        ++skipped;
      }
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool enough = compared >= 10;
  const bool agree = worst <= 1.0;
  const bool in_time = secs < kSecondsGridTotal;
  std::ostringstream detail;
  detail << compared << " stable / " << skipped << " unstable points, worst |dQ|/allowed = "
         << fmt(worst) << (agree ? "" : " VIOLATED at " + worst_where) << ", " << fmt(secs)
         << "s of " << fmt(kSecondsGridTotal) << (in_time ? "" : " OVER BUDGET")
         << (enough ? "" : ", TOO FEW STABLE POINTS");
  return {enough && agree && in_time, detail.str()};
}

std::pair<bool, std::string> criterion_3() {
  std::mt19937 rng(20260816u);
  std::uniform_int_distribution<int> winding(0, 7);
  std::uniform_real_distribution<double> detuning(-2.5, 2.5);
  std::uniform_real_distribution<double> ratio(0.25, 4.0);
  std::uniform_real_distribution<double> coupling(1e-4, 1e-3);
  std::uniform_real_distribution<double> occupation(1.0, 100.0);

  int accepted = 0;
  int attempts = 0;
  double worst_omega = 0.0;
  double worst_gamma = 0.0;
  while (accepted < 20) {
    if (++attempts > 1000) return {false, "could not find 20 stable draws"};
    ModelParams p = ring_point(8, detuning(rng), ratio(rng) * 0.1,
                               two_pi * winding(rng) / 8.0, coupling(rng), 0.1, 1e-3,
                               occupation(rng));
    const MeanFieldSolution mf = solve_mean_field(p);
    const RingSpectrum rs = ring_spectrum(p, mf);
    if (!all_stable(rs)) continue;
    ++accepted;

    const PhotonGenerator gen = build_generator(p, mf);
    const ReservoirSpectrum spect = reservoir_spectra(gen, mf.G, p.omega_m);
    const double phi = p.drive.phase_gradient;
    const double G_mag = std::abs(mf.G[0]);
    const double dt = mf.delta_tilde[0];

    // Fourier-route hoppings against resolvent-route coherent kernels.
    for (int sign : {+1, -1}) {
      const Eigen::VectorXd Jp =
          hopping_amplitudes(8, phi, G_mag, dt, p.J, 0.1, 1.0, sign);
      const Eigen::MatrixXcd& Om = (sign == 1) ? spect.Omega_plus : spect.Omega_minus;
      for (int l = 0; l < 8; ++l)
        for (int m = 0; m < 8; ++m) {
          const complexd expected =
              std::polar(1.0, -static_cast<double>(l - m) * phi) * Jp[detail::imod(l - m, 8)];
          worst_omega = std::max(worst_omega, std::abs(Om(l, m) - expected));
        }
      // Collective rates against the analytic Bloch-mode rates.
      std::vector<double> analytic(8);
      for (int m = 0; m < 8; ++m)
        analytic[static_cast<std::size_t>(m)] =
            k_rate(two_pi * m / 8.0, sign * 1.0, phi, G_mag, dt, p.J, 0.1);
      std::sort(analytic.begin(), analytic.end(), std::greater<double>());
      const Eigen::VectorXd& rates = (sign == 1) ? spect.Gamma_plus : spect.Gamma_minus;
      for (int m = 0; m < 8; ++m)
        worst_gamma =
            std::max(worst_gamma, std::abs(rates[m] - analytic[static_cast<std::size_t>(m)]));
    }
  }
  const bool ok = worst_omega <= kDualRouteTol && worst_gamma <= kDualRouteTol;
  std::ostringstream detail;
  detail << "20 stable draws (" << attempts << " attempts), worst |Omega - gauge*J_p| = "
         << fmt(worst_omega) << ", worst |Gamma - analytic| = " << fmt(worst_gamma)
         << " vs tol " << fmt(kDualRouteTol);
  return {ok, detail.str()};
}

std::pair<bool, std::string> criterion_4() {
  std::ostringstream detail;
  bool ok = true;

  {
    ModelParams p = weak_point(-1.2, 2.0);
    p.drive.phase_gradient = 0.0;
    const CurrentReport rep = steady_state(p, solve_mean_field(p));
    const bool zero = std::abs(rep.Q_C) <= kSymmetryTol;
    ok = ok && zero;
    detail << "phi=0: |Q_C| = " << fmt(std::abs(rep.Q_C)) << (zero ? "" : " VIOLATED");
  }
  {
    ModelParams pf = weak_point(-1.2, 2.0);
    ModelParams pb = pf;
    pb.drive.phase_gradient = -pf.drive.phase_gradient;
    const CurrentReport rf = steady_state(pf, solve_mean_field(pf));
    const CurrentReport rb = steady_state(pb, solve_mean_field(pb));
    bool exact = rb.Q_C == -rf.Q_C;
    for (int i = 0; i < rf.Q_p.size(); ++i) exact = exact && rb.Q_p[i] == -rf.Q_p[i];
    ok = ok && exact;
    detail << "; phi -> -phi: Q negation " << (exact ? "bitwise" : "NOT EXACT");
  }
  {
    ModelParams p = weak_point(-1.0, 2.0);
    p.g.setZero();
    set_dressed_detuning(p, -1.0);
    const CurrentReport rep = steady_state(p, solve_mean_field(p));
    double worst_n = 0.0;
    for (int m = 0; m < 8; ++m) worst_n = std::max(worst_n, std::abs(rep.populations_k[m] - 100.0));
    Eigen::MatrixXcd dev = rep.sigma;
    for (int l = 0; l < 8; ++l) dev(l, l) -= 100.0;
    const double worst_sigma = dev.cwiseAbs().maxCoeff();
    const bool dark = worst_n <= kSymmetryTol && worst_sigma <= kSymmetryTol;
    ok = ok && dark;
    detail << "; g=0: max|n_k - nbar| = " << fmt(worst_n) << ", max|sigma - nbar I| = "
           << fmt(worst_sigma) << (dark ? "" : " VIOLATED");
  }
  return {ok, detail.str()};
}

std::pair<bool, std::string> criterion_5() {
  // The identity was tracked on every stable run of the grid sweep; add the
  // two cross-check points so the low-occupation regime is covered as well.
  for (double ratio : {1.0, 5.0}) {
    const ModelParams p = crosscheck_point(ratio);
    const MeanFieldSolution mf = solve_mean_field(p);
    const CurrentReport kspace = steady_state(p, mf);
    const RingSpectrum rs = ring_spectrum(p, mf);
    track_parseval(kspace,
                   current_from_sigma(kspace.sigma, rs.J_p_plus, rs.J_p_minus, rs.phi, 1.0),
                   p.omega_m[0] * p.gamma_m[0]);
  }
  const bool ok = g_parseval_runs > 0 && g_worst_parseval <= kParsevalTol;
  std::ostringstream detail;
  detail << g_parseval_runs << " stable runs, worst relative mismatch = "
         << fmt(g_worst_parseval) << " vs tol " << fmt(kParsevalTol);
  return {ok, detail.str()};
}

std::pair<bool, std::string> criterion_6() {
  double worst_resid = 0.0;
  double worst_comm = 0.0;
  double worst_eig = 0.0;
  const std::vector<ModelParams> points = {crosscheck_point(1.0), crosscheck_point(5.0),
                                           weak_point(-1.1, 1.0)};
  for (const ModelParams& p : points) {
    const MeanFieldSolution mf = solve_mean_field(p);
    CovarianceState st = build_linearized_system(p, mf);
    steady_covariance(st);
    const double dmax = st.D.cwiseAbs().maxCoeff();
    const double resid =
        (st.M * st.C + st.C * st.M.transpose() + st.D).cwiseAbs().maxCoeff() / dmax;
    worst_resid = std::max(worst_resid, resid);
    for (int l = 0; l < p.lattice.L; ++l) {
      const complexd comm = st.C(detail::id_(p.lattice.L, l), detail::idd(p.lattice.L, l)) -
                            st.C(detail::idd(p.lattice.L, l), detail::id_(p.lattice.L, l));
      worst_comm = std::max(worst_comm, std::abs(comm - complexd(1.0, 0.0)));
    }
    const Eigen::MatrixXcd sigma = sigma_mf(st);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (sigma + sigma.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    worst_eig = std::min(worst_eig, es.eigenvalues().minCoeff());
  }
  const bool ok = worst_resid <= kLyapunovResidTol && worst_comm <= kCommutatorTol &&
                  worst_eig >= kPsdFloor;
  std::ostringstream detail;
  detail << "residual/|D| = " << fmt(worst_resid) << ", commutator drift = " << fmt(worst_comm)
         << ", min eig = " << fmt(worst_eig);
  return {ok, detail.str()};
}

std::pair<bool, std::string> criterion_7() {
  std::ostringstream detail;
  bool ok = true;

  // (a) Sign change of Q_C across the lower sideband at fixed hopping.
  {
    ModelParams p = weak_point(-1.0, 1.0);
    std::vector<std::pair<double, double>> cut;
    for (double dt = -1.5; dt <= -0.7 + 1e-12; dt += 0.02) {
      set_dressed_detuning(p, dt);
      try {
        cut.emplace_back(dt, steady_state(p, solve_mean_field(p)).Q_C);
      } catch (const instability_error&) {
      }
    }
    bool flips = false;
    double where = 0.0;
    for (std::size_t i = 1; i < cut.size(); ++i)
      if (cut[i - 1].second * cut[i].second < 0.0) {
        flips = true;
        where = cut[i].first;
        break;
      }
    ok = ok && flips;
    detail << "sign change on the fixed-J cut: " << (flips ? "yes, near " + fmt(where) : "NONE");
  }

  // (b) Range decomposition on the ridge: short range dominates at weak
  // hopping, longer ranges appear at strong hopping.
  {
    const std::optional<RidgeResult> weak = ridge_scan(0.25);
    bool short_range = false;
    double frac1 = 0.0;
    if (weak && std::abs(weak->rep.Q_C) > 0.0) {
      frac1 = std::abs(weak->rep.Q_p[0]) / std::abs(weak->rep.Q_C);
      short_range = frac1 >= 0.9;
    }
    bool long_range = false;
    double best_ge2 = 0.0;
    for (double r : {2.0, 2.5, 3.0, 4.0, 6.0, 8.0}) {
      const std::optional<RidgeResult> strong = ridge_scan(r);
      if (!strong || std::abs(strong->rep.Q_C) == 0.0) continue;
      double ge2 = 0.0;
      for (int i = 1; i < strong->rep.Q_p.size(); ++i) ge2 += std::abs(strong->rep.Q_p[i]);
      ge2 /= std::abs(strong->rep.Q_C);
      best_ge2 = std::max(best_ge2, ge2);
      long_range = long_range || ge2 > 0.1;
    }
    ok = ok && short_range && long_range;
    detail << "; ridge ranges: Q_p1 share at J/gamma_c=0.25 = " << fmt(frac1)
           << (short_range ? "" : " VIOLATED") << ", best p>=2 share at J/gamma_c>=2 = "
           << fmt(best_ge2) << (long_range ? "" : " VIOLATED");
  }

  // (c) Spatial coherence grows with hopping along the red band edge.
  {
    bool mono2 = true;
    bool mono3 = true;
    double prev2 = -1.0;
    double prev3 = -1.0;
    for (double r : linspace(0.5, 4.0, 8)) {
      ModelParams p = weak_point(-1.0, r);
      set_dressed_detuning(p, -1.0 - p.J);
      const CurrentReport rep = steady_state(p, solve_mean_field(p));
      const double a2 = std::abs(rep.g1(0, 2));
      const double a3 = std::abs(rep.g1(0, 3));
      mono2 = mono2 && a2 > prev2;
      mono3 = mono3 && a3 > prev3;
      prev2 = a2;
      prev3 = a3;
    }
    ok = ok && mono2 && mono3;
    detail << "; |g1| monotone over J/gamma_c in [0.5,4]: p=2 " << (mono2 ? "yes" : "NO")
           << ", p=3 " << (mono3 ? "yes" : "NO");
  }
  return {ok, detail.str()};
}

std::pair<bool, std::string> criterion_8() {
  std::mt19937 rng(777u);
  std::uniform_int_distribution<int> winding(0, 7);
  std::uniform_real_distribution<double> detuning(-2.5, 2.5);
  std::uniform_real_distribution<double> ratio(0.25, 4.0);
  std::uniform_real_distribution<double> coupling(1e-4, 1e-3);  // G <= gamma_c / 10
  std::uniform_real_distribution<double> occupation(1.0, 100.0);

  int matches = 0;
  int marginal = 0;
  int mismatches = 0;
  std::ostringstream log;
  for (int draw = 0; draw < 20; ++draw) {
    const ModelParams p = ring_point(8, detuning(rng), ratio(rng) * 0.1,
                                     two_pi * winding(rng) / 8.0, coupling(rng), 0.1, 1e-3,
                                     occupation(rng));
    const MeanFieldSolution mf = solve_mean_field(p);
    const RingSpectrum rs = ring_spectrum(p, mf);
    const bool ring_verdict = all_stable(rs);
    double ring_margin = std::numeric_limits<double>::infinity();
    for (int m = 0; m < 8; ++m)
      ring_margin = std::min(ring_margin,
                             rs.Gamma_down_k[m] - rs.Gamma_up_k[detail::imod(-m, 8)]);
    const double drift_worst = drift_max_real(assemble_linearized_system(p, mf).M);
    const bool drift_verdict = drift_worst < 0.0;
    if (ring_verdict == drift_verdict) {
      ++matches;
    } else if (std::abs(ring_margin) < kMarginalRate || std::abs(drift_worst) < kMarginalRate) {
      ++marginal;
      log << " draw " << draw << " marginal (ring margin " << fmt(ring_margin)
          << ", drift max Re " << fmt(drift_worst) << ");";
    } else {
      ++mismatches;
      log << " draw " << draw << " MISMATCH (ring " << (ring_verdict ? "stable" : "unstable")
          << ", drift max Re " << fmt(drift_worst) << ");";
    }
  }
  std::ostringstream detail;
  detail << matches << " matches, " << marginal << " marginal, " << mismatches
         << " mismatches over 20 weak-coupling draws" << log.str();
  return {mismatches == 0, detail.str()};
}

std::pair<bool, std::string> criterion_9() {
  std::ostringstream detail;
  bool ok = true;
  const int L = 8;
  const Eigen::VectorXd dt = Eigen::VectorXd::Constant(L, -1.1);
  const Eigen::VectorXd gc = Eigen::VectorXd::Constant(L, 0.1);
  const PhotonGenerator gen = build_generator(build_ring(L).adjacency, 0.2, dt, gc);

  {
    const SqueezedEffectiveModel m = two_tone_squeezing_model(
        gen, Eigen::VectorXcd::Zero(L), Eigen::VectorXcd::Constant(L, complexd(0.01, 0.0)));
    const double worst = m.pairing_coeffs.cwiseAbs().maxCoeff();
    ok = ok && worst <= kZeroPairingTol;
    detail << "single tone: max |pairing| = " << fmt(worst);
  }
  {
    const double gp = 0.005;
    const double gm = 0.01;
    const double nu = 0.3;
    const double eta = std::sqrt(gm * gm - gp * gp);
    const double ch = gm / eta;
    const double sh = gp / eta;
    const Eigen::MatrixXcd S =
        reservoir_spectrum_at(gen, Eigen::VectorXcd::Constant(L, complexd(eta, 0.0)), 0.0);
    const Eigen::MatrixXcd Omega = (S - S.adjoint()) * complexd(0.0, -0.5);
    const auto [theta, varphi] = phase_matched_phases(Omega, nu);
    Eigen::VectorXcd G_plus(L), G_minus(L);
    for (int l = 0; l < L; ++l) {
      G_plus[l] = gp * std::polar(1.0, theta[l]);
      G_minus[l] = gm * std::polar(1.0, varphi[l]);
    }
    const SqueezedEffectiveModel m = two_tone_squeezing_model(gen, G_plus, G_minus);
    double worst_bs = 0.0;
    double worst_pair = 0.0;
    for (int l = 0; l + 1 < L; ++l) {
      const double mag = std::abs(m.Omega(l + 1, l));
      const complexd bs_expected(2.0 * mag * (sh * sh + 0.5), 0.0);
      const complexd pair_expected = 2.0 * mag * ch * sh * std::polar(1.0, nu);
      worst_bs = std::max(worst_bs, std::abs(m.beamsplitter_coeffs(l + 1, l) - bs_expected));
      worst_pair = std::max(worst_pair, std::abs(m.pairing_coeffs(l + 1, l) - pair_expected));
    }
    const bool closed = worst_bs <= kClosedFormTol && worst_pair <= kClosedFormTol;
    ok = ok && closed;
    detail << "; phase-matched ring: |BS - closed form| = " << fmt(worst_bs)
           << ", |pairing - closed form| = " << fmt(worst_pair) << " vs tol "
           << fmt(kClosedFormTol);
  }
  return {ok, detail.str()};
}

}  // namespace

int main() {
  run_criterion(1, "two-route error at the reference cross-check points", criterion_1);
  run_criterion(2, "heat-current agreement across the stable grid", criterion_2);
  run_criterion(3, "dual-derivation identity of hoppings and rates", criterion_3);
  run_criterion(4, "gauge and dark-lattice symmetries", criterion_4);
  run_criterion(5, "k-space vs real-space current identity", criterion_5);
  run_criterion(6, "covariance-oracle physicality", criterion_6);
  run_criterion(7, "qualitative current structure", criterion_7);
  run_criterion(8, "stability predicate consistency", criterion_8);
  run_criterion(9, "two-tone coupling closed forms", criterion_9);
  std::printf("acceptance: %d of 9 criteria passed\n", 9 - g_failures);
  return g_failures;
}
