// Copyright (c) 2026, the optoring authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "optoring/config.hpp"
#include "optoring/model.hpp"

using namespace optoring;

TEST_CASE("ring adjacency has two neighbours per site for L >= 3", "[model]") {
  for (int L : {3, 5, 8}) {
    const LatticeSpec spec = build_ring(L);
    REQUIRE(spec.L == L);
    REQUIRE(spec.adjacency.rows() == L);
    for (int l = 0; l < L; ++l) REQUIRE(spec.adjacency.row(l).sum() == 2);
    REQUIRE(spec.adjacency == spec.adjacency.transpose().eval());
    REQUIRE(spec.adjacency.diagonal().isZero());
    REQUIRE_NOTHROW(validate_lattice(spec));
  }
  const LatticeSpec r8 = build_ring(8);
  REQUIRE(r8.adjacency(0, 1) == 1);
  REQUIRE(r8.adjacency(0, 7) == 1);
  REQUIRE(r8.adjacency(0, 2) == 0);
}

TEST_CASE("degenerate rings: L=1 has no bonds, L=2 a single bond", "[model]") {
  const LatticeSpec r1 = build_ring(1);
  REQUIRE(r1.adjacency(0, 0) == 0);
  const LatticeSpec r2 = build_ring(2);
  REQUIRE(r2.adjacency(0, 1) == 1);
  REQUIRE(r2.adjacency(1, 0) == 1);
  REQUIRE(r2.adjacency.row(0).sum() == 1);
  REQUIRE_NOTHROW(validate_lattice(r1));
  REQUIRE_NOTHROW(validate_lattice(r2));
  REQUIRE_THROWS_AS(build_ring(0), std::invalid_argument);
}

TEST_CASE("open chain has end sites with one neighbour", "[model]") {
  const LatticeSpec c4 = build_chain(4);
  REQUIRE(c4.adjacency.row(0).sum() == 1);
  REQUIRE(c4.adjacency.row(1).sum() == 2);
  REQUIRE(c4.adjacency.row(2).sum() == 2);
  REQUIRE(c4.adjacency.row(3).sum() == 1);
  REQUIRE_NOTHROW(validate_lattice(c4));
}

TEST_CASE("lattice validation rejects broken structure", "[model]") {
  LatticeSpec bad = build_ring(4);
  bad.adjacency(1, 2) = 0;  // asymmetric now
  REQUIRE_THROWS_AS(validate_lattice(bad), std::invalid_argument);

  LatticeSpec diag = build_ring(4);
  diag.topology_tag = Topology::custom;
  diag.adjacency(2, 2) = 1;
  REQUIRE_THROWS_AS(validate_lattice(diag), std::invalid_argument);

  LatticeSpec two = build_ring(4);
  two.topology_tag = Topology::custom;
  two.adjacency(0, 2) = 2;
  two.adjacency(2, 0) = 2;
  REQUIRE_THROWS_AS(validate_lattice(two), std::invalid_argument);

  // A chain matrix under a ring tag violates the tagged pattern.
  LatticeSpec mismatch = build_chain(5);
  mismatch.topology_tag = Topology::ring;
  REQUIRE_THROWS_AS(validate_lattice(mismatch), std::invalid_argument);
}

namespace {

ModelParams uniform_ring_params(int L) {
  ModelParams p;
  p.lattice = build_ring(L);
  p.omega_m = Eigen::VectorXd::Constant(L, 1.0);
  p.delta = Eigen::VectorXd::Constant(L, -1.1);
  p.g = Eigen::VectorXd::Constant(L, 2e-3);
  p.J = 0.1;
  p.gamma_c = Eigen::VectorXd::Constant(L, 0.1);
  p.gamma_m = Eigen::VectorXd::Constant(L, 1e-3);
  p.nbar = Eigen::VectorXd::Constant(L, 100.0);
  p.drive.mode = DriveMode::alpha_prescribed;
  p.drive.alpha_magnitude = 10.0;
  p.drive.phase_gradient = two_pi / L;
  return p;
}

}  // namespace

TEST_CASE("parameter validation rejects bad lengths and signs", "[model]") {
  REQUIRE_NOTHROW(validate_params(uniform_ring_params(8)));

  ModelParams short_vec = uniform_ring_params(8);
  short_vec.gamma_m = Eigen::VectorXd::Constant(7, 1e-3);
  REQUIRE_THROWS_AS(validate_params(short_vec), std::invalid_argument);

  ModelParams neg = uniform_ring_params(8);
  neg.gamma_c[3] = -0.1;
  REQUIRE_THROWS_AS(validate_params(neg), std::invalid_argument);

  ModelParams nan_nbar = uniform_ring_params(8);
  nan_nbar.nbar[0] = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(validate_params(nan_nbar), std::invalid_argument);

  ModelParams neg_j = uniform_ring_params(8);
  neg_j.J = -0.2;
  REQUIRE_THROWS_AS(validate_params(neg_j), std::invalid_argument);

  ModelParams bad_phases = uniform_ring_params(8);
  bad_phases.drive.phases = {0.0, 0.1};
  REQUIRE_THROWS_AS(validate_params(bad_phases), std::invalid_argument);
}

TEST_CASE("drive phase follows the gradient unless overridden", "[model]") {
  DriveSpec d;
  d.phase_gradient = 0.3;
  REQUIRE(drive_phase(d, 0) == 0.0);
  REQUIRE(drive_phase(d, 5) == Catch::Approx(1.5).margin(1e-15));
  d.phases = {0.7, -0.2, 0.0};
  REQUIRE(drive_phase(d, 1) == -0.2);
}

TEST_CASE("commensurate phase detection on the k grid", "[model]") {
  REQUIRE(phase_grid_index(0.0, 8) == 0);
  REQUIRE(phase_grid_index(two_pi / 8.0, 8) == 1);
  REQUIRE(phase_grid_index(3.0 * two_pi / 8.0, 8) == 3);
  REQUIRE(phase_grid_index(-two_pi / 8.0, 8) == 7);
  REQUIRE(phase_grid_index(two_pi, 8) == 0);
  REQUIRE(phase_grid_index(two_pi / 8.0 + 1e-3, 8) == std::nullopt);
  REQUIRE(phase_grid_index(0.7, 8) == std::nullopt);
  // pi/2 on L=8 is the winding-2 gradient
  REQUIRE(phase_grid_index(two_pi / 4.0, 8) == 2);
}

TEST_CASE("parameter serialization round-trips bit-exactly", "[model]") {
  ModelParams p = uniform_ring_params(8);
  p.delta[2] = -1.0 / 3.0;
  p.g[5] = 1e-3 * std::sqrt(2.0);
  p.drive.phase_gradient = two_pi / 7.0;

  const json j = params_to_json(p);
  const ModelParams q = params_from_json(j);

  REQUIRE(q.lattice.L == p.lattice.L);
  REQUIRE(q.lattice.adjacency == p.lattice.adjacency);
  REQUIRE(q.lattice.topology_tag == p.lattice.topology_tag);
  REQUIRE(q.omega_m == p.omega_m);
  REQUIRE(q.delta == p.delta);
  REQUIRE(q.g == p.g);
  REQUIRE(q.J == p.J);
  REQUIRE(q.gamma_c == p.gamma_c);
  REQUIRE(q.gamma_m == p.gamma_m);
  REQUIRE(q.nbar == p.nbar);
  REQUIRE(q.drive.mode == p.drive.mode);
  REQUIRE(q.drive.alpha_magnitude == p.drive.alpha_magnitude);
  REQUIRE(q.drive.phase_gradient == p.drive.phase_gradient);

  // Textual round trip preserves every bit as well.
  const json j2 = params_to_json(params_from_json(json::parse(j.dump())));
  REQUIRE(j2 == j);
}

TEST_CASE("custom adjacency survives serialization", "[model]") {
  ModelParams p = uniform_ring_params(4);
  p.lattice.topology_tag = Topology::custom;
  p.lattice.adjacency(0, 2) = 1;
  p.lattice.adjacency(2, 0) = 1;
  const ModelParams q = params_from_json(params_to_json(p));
  REQUIRE(q.lattice.topology_tag == Topology::custom);
  REQUIRE(q.lattice.adjacency == p.lattice.adjacency);
}
