#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "episim/dynamics.hpp"
#include "episim/errors.hpp"
#include "episim/system_matrices.hpp"
#include "episim/validation.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace episim;
using testsupport::corpus_schedule;
using testsupport::two_cycle_p1;

TEST_CASE("validate_schedule: hand-built two-node schedule passes A2/A3/A5") {
  const PeriodicSchedule s = two_cycle_p1(0.5);  // h*delta = 0.05, h*row = 0.1
  const ValidationReport report = validate_schedule(s);
  CHECK(report.passed(Assumption::A2));
  CHECK(report.passed(Assumption::A3));
  CHECK(report.passed(Assumption::A4));
  CHECK(report.passed(Assumption::A5));
  CHECK(report.core_ok());
  CHECK(report.gas_ready());
}

TEST_CASE("validate_schedule: flight-style in-degree 125 with h = 0.005 meets A3") {
  // Full 3-node graph with one heavy route so node 0 has weighted
  // in-degree 125, the day-phase maximum of the flight study shape.
  PeriodicSchedule s;
  s.n = 3;
  s.p = 3;
  s.h = 0.005;
  GraphPhase phase;
  phase.adjacency = {{0, 1, 124.0}, {0, 2, 1.0}, {1, 2, 1.0},
                     {1, 0, 1.0},   {2, 0, 1.0}, {2, 1, 1.0}};
  phase.beta = {1.0, 1.0, 1.0};
  phase.delta = {35.0, 35.0, 35.0};
  s.phases = {phase, phase, phase};
  CHECK(weighted_in_degree(s.phases[0], 0) == doctest::Approx(125.0));
  const ValidationReport report = validate_schedule(s);
  CHECK(report.passed(Assumption::A3));  // h * 125 = 0.625, h * 35 = 0.175
  CHECK(report.core_ok());
}

TEST_CASE("validate_schedule: isolated single node fails A4 only") {
  PeriodicSchedule s;
  s.n = 1;
  s.p = 1;
  s.h = 0.5;
  GraphPhase phase;
  phase.beta = {1.0};
  phase.delta = {1.0};
  s.phases = {phase};
  const ValidationReport report = validate_schedule(s);
  CHECK(report.core_ok());
  CHECK_FALSE(report.passed(Assumption::A4));
  CHECK(report.passed(Assumption::A5));  // one node is trivially one component
}

TEST_CASE("validate_schedule: structural violations throw") {
  PeriodicSchedule s = two_cycle_p1(0.5);
  SUBCASE("negative weight") {
    s.phases[0].adjacency[0].weight = -1.0;
    CHECK_THROWS_AS(validate_schedule(s), InvalidInput);
  }
  SUBCASE("length mismatch") {
    s.phases[0].beta.pop_back();
    CHECK_THROWS_AS(validate_schedule(s), InvalidInput);
  }
  SUBCASE("duplicate edge") {
    s.phases[0].adjacency.push_back({0, 1, 2.0});
    CHECK_THROWS_AS(validate_schedule(s), InvalidInput);
  }
  SUBCASE("wrong phase count") {
    s.p = 2;
    CHECK_THROWS_AS(validate_schedule(s), InvalidInput);
  }
}

TEST_CASE("validate_schedule: strict mode turns A3 failure into an error") {
  PeriodicSchedule s = two_cycle_p1(11.0);  // h*delta = 1.1 > 1
  const ValidationReport report = validate_schedule(s);
  CHECK_FALSE(report.passed(Assumption::A3));
  CHECK(report.check(Assumption::A3).offenders.size() == 2);
  CHECK_THROWS_AS(validate_schedule(s, /*strict=*/true), InvalidInput);
}

TEST_CASE("build_system_matrices: two-node fixture") {
  const SystemMatrices mats = build_system_matrices(two_cycle_p1(0.5));
  REQUIRE(mats.p == 1);
  CHECK(mats.m[0](0, 0) == doctest::Approx(0.95).epsilon(1e-14));
  CHECK(mats.m[0](0, 1) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(mats.m[0](1, 0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(mats.m[0](1, 1) == doctest::Approx(0.95).epsilon(1e-14));
  CHECK(mats.bbar[0](0, 1) == 1.0);
  CHECK(mats.bbar[0](0, 0) == 0.0);
}

TEST_CASE("build_system_matrices: no rates gives the identity") {
  PeriodicSchedule s;
  s.n = 3;
  s.p = 2;
  s.h = 0.25;
  GraphPhase phase;
  phase.beta = {0.0, 0.0, 0.0};
  phase.delta = {0.0, 0.0, 0.0};
  s.phases = {phase, phase};
  const SystemMatrices mats = build_system_matrices(s);
  for (const Eigen::MatrixXd& m : mats.m)
    CHECK((m - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_system_matrices: full healing and no spread zeroes M") {
  PeriodicSchedule s = testsupport::scalar_decay(0.5, 2.0);  // h*delta = 1
  const SystemMatrices mats = build_system_matrices(s);
  CHECK(mats.m[0](0, 0) == 0.0);
}

TEST_CASE("step: disease-free state is a bitwise fixed point") {
  const SystemMatrices mats = build_system_matrices(two_cycle_p1(0.5));
  const StateVector zero = StateVector::Zero(2);
  const StateVector next = step(mats, 0, zero);
  CHECK(next(0) == 0.0);
  CHECK(next(1) == 0.0);
}

TEST_CASE("step: hand-evaluated update") {
  const SystemMatrices mats = build_system_matrices(two_cycle_p1(0.5));
  StateVector x(2);
  x << 1.0, 0.0;
  const StateVector next = step(mats, 0, x);
  CHECK(next(0) == doctest::Approx(0.95).epsilon(1e-14));
  CHECK(next(1) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("step: scalar healing decay") {
  const SystemMatrices mats = build_system_matrices(testsupport::scalar_decay(0.5, 1.0));
  StateVector x(1);
  x << 1.0;
  CHECK(step(mats, 0, x)(0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("step: input outside tolerance is rejected, drift is clamped") {
  const SystemMatrices mats = build_system_matrices(two_cycle_p1(0.5));
  StateVector bad(2);
  bad << 1.5, 0.0;
  CHECK_THROWS_AS(step(mats, 0, bad), InvalidInput);
  StateVector drift(2);
  drift << -1e-13, 1.0 + 1e-13;
  CHECK_NOTHROW(step(mats, 0, drift));
}

TEST_CASE("simulate: geometric decay fixture") {
  const PeriodicSchedule s = testsupport::scalar_decay(0.5, 1.0);
  StateVector x0(1);
  x0 << 1.0;
  const Trajectory traj = simulate(s, x0, 3);
  REQUIRE(traj.states.size() == 4);
  CHECK(traj.states[0](0) == 1.0);
  CHECK(traj.states[1](0) == 0.5);
  CHECK(traj.states[2](0) == 0.25);
  CHECK(traj.states[3](0) == 0.125);
  CHECK(traj.xbar[3] == 0.125);
}

TEST_CASE("simulate: all-zero start stays all zero") {
  const PeriodicSchedule s = testsupport::two_cycle_p2_unstable();
  const Trajectory traj = simulate(s, StateVector::Zero(2), 100);
  for (const StateVector& x : traj.states) CHECK(x.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("property: positive invariance over random schedules") {
  // Acceptance runs the full 500 x 10^4 version; this is the smoke copy.
  std::mt19937_64 rng(0xC0FFEE01);
  for (int trial = 0; trial < 40; ++trial) {
    const PeriodicSchedule s = testsupport::random_schedule(rng);
    REQUIRE(validate_schedule(s).core_ok());
    const SystemMatrices mats = build_system_matrices(s);
    StateVector x0(s.n);
    for (int i = 0; i < s.n; ++i) x0(i) = testsupport::uniform01(rng);
    const Trajectory traj = simulate(mats, x0, 2000);
    for (const StateVector& x : traj.states) {
      CHECK(x.minCoeff() >= -1e-12);
      CHECK(x.maxCoeff() <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("property: scalar and matrix step forms agree to 10 ulp") {
  std::mt19937_64 rng(0xC0FFEE02);
  for (int trial = 0; trial < 50; ++trial) {
    const PeriodicSchedule s = testsupport::random_schedule(rng);
    const SystemMatrices mats = build_system_matrices(s);
    StateVector x(s.n);
    for (int i = 0; i < s.n; ++i) x(i) = testsupport::uniform01(rng);
    for (int k = 0; k < s.p; ++k) {
      const StateVector a = step(mats, k, x);
      const StateVector b = step_scalar(s, k, x);
      for (int i = 0; i < s.n; ++i) CHECK(testsupport::ulp_distance(a(i), b(i)) <= 10);
    }
  }
}

TEST_CASE("property: periodicity, simulating 2p steps equals two p-step legs") {
  std::mt19937_64 rng(0xC0FFEE03);
  for (int trial = 0; trial < 20; ++trial) {
    const PeriodicSchedule s = testsupport::random_schedule(rng);
    const SystemMatrices mats = build_system_matrices(s);
    StateVector x0(s.n);
    for (int i = 0; i < s.n; ++i) x0(i) = testsupport::uniform01(rng);
    const Trajectory whole = simulate(mats, x0, 2L * s.p);
    const Trajectory first = simulate(mats, x0, s.p);
    const Trajectory second = simulate(mats, first.back(), s.p);
    for (int k = 0; k <= s.p; ++k) {
      const StateVector& a = whole.states[static_cast<size_t>(s.p + k)];
      const StateVector& b = second.states[static_cast<size_t>(k)];
      CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);  // same phases, same code path
    }
  }
}
