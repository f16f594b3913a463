#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "episim/control.hpp"
#include "episim/dynamics.hpp"
#include "episim/errors.hpp"
#include "episim/lifted.hpp"
#include "episim/stability.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"

using namespace episim;
using testsupport::corpus_schedule;

namespace {

StabilityReport classify_schedule(const PeriodicSchedule& s, ClassifyOptions options = {}) {
  return classify(s, build_system_matrices(s), options);
}

}  // namespace

TEST_CASE("classify: GES fixture (rho = 0.95)") {
  const StabilityReport report = classify_schedule(testsupport::two_cycle_p1(1.5));
  CHECK(report.rho_monodromy == doctest::Approx(0.95).epsilon(1e-11));
  CHECK(report.classification == Classification::GES);
  REQUIRE(report.certificate.has_value());
  CHECK(report.certificate->mode == LyapunovCertificate::Mode::Strict);
  CHECK(report.certificate->defect < 0.0);
  REQUIRE(report.rate.has_value());
}

TEST_CASE("classify: gamma = 0 controlled fixture lands on the boundary") {
  const SynthesisResult controlled = synthesize(testsupport::two_cycle_p2_control(), 0.0);
  const StabilityReport report = classify_schedule(controlled.schedule);
  CHECK(report.rho_monodromy == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(report.classification == Classification::GAS_BOUNDARY);
  REQUIRE(report.certificate.has_value());
  CHECK(report.certificate->mode == LyapunovCertificate::Mode::Semidefinite);
  CHECK(report.certificate->defect <= 1e-9);
}

TEST_CASE("classify: unstable fixture (rho = 1.10)") {
  const StabilityReport report = classify_schedule(testsupport::two_cycle_p2_unstable());
  CHECK(report.rho_monodromy == doctest::Approx(1.10).epsilon(1e-11));
  CHECK(report.classification == Classification::UNSTABLE);
  CHECK_FALSE(report.certificate.has_value());
}

TEST_CASE("classify: boundary without strong connectivity is inconclusive") {
  // Two isolated self-healing nodes, delta = 0: M = I, rho = 1, A4/A5 fail.
  PeriodicSchedule s;
  s.n = 2;
  s.p = 1;
  s.h = 0.1;
  GraphPhase phase;
  phase.beta = {1.0, 1.0};
  phase.delta = {0.0, 0.0};
  s.phases = {phase};
  const StabilityReport report = classify_schedule(s);
  CHECK(report.rho_monodromy == doctest::Approx(1.0));
  CHECK_FALSE(report.a4_ok);
  CHECK(report.classification == Classification::INCONCLUSIVE);
}

TEST_CASE("lyapunov_certificate: scalar fixture P = 1, defect -0.75") {
  const SystemMatrices mats = build_system_matrices(testsupport::scalar_decay(0.5, 1.0));
  const LyapunovCertificate cert = lyapunov_certificate(mats);
  CHECK(cert.mode == LyapunovCertificate::Mode::Strict);
  CHECK(cert.mu == doctest::Approx(0.75));
  CHECK(cert.P[0](0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cert.defect == doctest::Approx(-0.75).epsilon(1e-12));
}

TEST_CASE("lyapunov_certificate: symmetric boundary lift gives Q = I, defect 0") {
  const SynthesisResult controlled = synthesize(testsupport::two_cycle_p2_control(), 0.0);
  const SystemMatrices mats = build_system_matrices(controlled.schedule);
  const LyapunovCertificate cert = lyapunov_certificate(mats);
  CHECK(cert.mode == LyapunovCertificate::Mode::Semidefinite);
  for (const Eigen::VectorXd& p : cert.P)
    for (Eigen::Index i = 0; i < p.size(); ++i) CHECK(p(i) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(cert.defect) <= 1e-9);
}

TEST_CASE("lyapunov_certificate: zero matrix yields Q = I with defect -1") {
  const SystemMatrices mats = build_system_matrices(testsupport::scalar_decay(0.5, 2.0));
  const LyapunovCertificate cert = lyapunov_certificate(mats);
  CHECK(cert.P[0](0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cert.defect == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("rate_bound: scalar fixture reproduces the exact decay rate") {
  const SystemMatrices mats = build_system_matrices(testsupport::scalar_decay(0.5, 1.0));
  const RateBound rate = rate_bound(lyapunov_certificate(mats), mats);
  CHECK(rate.sigma1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rate.sigma2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rate.sigma3 == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rate.sigma3_conservative == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::abs(rate.rate - 0.5) <= 1e-10);
  CHECK(std::abs(rate.rate_conservative - 0.5) <= 1e-10);
}

TEST_CASE("rate_bound: one-step death has rate 0") {
  const SystemMatrices mats = build_system_matrices(testsupport::scalar_decay(0.5, 2.0));
  const RateBound rate = rate_bound(lyapunov_certificate(mats), mats);
  CHECK(rate.sigma3_conservative == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rate.rate_conservative == doctest::Approx(0.0));
}

TEST_CASE("rate_bound: rejects semidefinite certificates") {
  const SynthesisResult controlled = synthesize(testsupport::two_cycle_p2_control(), 0.0);
  const SystemMatrices mats = build_system_matrices(controlled.schedule);
  CHECK_THROWS_AS(rate_bound(lyapunov_certificate(mats), mats), InvalidInput);
}

TEST_CASE("property: certificates verify and Lyapunov values decrease on GES corpus") {
  std::mt19937_64 rng(0x57AB0001);
  int ges_seen = 0;
  for (int trial = 0; trial < 60 && ges_seen < 25; ++trial) {
    const PeriodicSchedule s = testsupport::random_schedule(rng);
    const SystemMatrices mats = build_system_matrices(s);
    const StabilityReport report = classify(s, mats, {});
    if (report.classification != Classification::GES) continue;
    ++ges_seen;
    REQUIRE(report.certificate.has_value());
    // P is max-normalized, so the strictness margin scales as 1e-12 * 1
    CHECK(report.certificate->defect < -1e-12);
    REQUIRE(report.rate.has_value());
    CHECK(report.rate->sigma2 >= report.rate->sigma3);  // Weyl
    CHECK(report.rate->rate_conservative >= 0.0);
    CHECK(report.rate->rate_conservative < 1.0);

    StateVector x(s.n);
    for (int i = 0; i < s.n; ++i) x(i) = testsupport::uniform01(rng);
    const Trajectory traj = simulate(mats, x, 400);
    const double sigma3c = report.rate->sigma3_conservative;
    for (long k = 0; k < traj.steps(); ++k) {
      const StateVector& xk = traj.states[static_cast<size_t>(k)];
      const double norm2 = xk.squaredNorm();
      const double dv = lyapunov_value(*report.certificate, k + 1,
                                       traj.states[static_cast<size_t>(k + 1)]) -
                        lyapunov_value(*report.certificate, k, xk);
      CHECK(dv <= -sigma3c * norm2 * (1.0 - 1e-9) + 1e-300);
    }
  }
  CHECK(ges_seen >= 25);
}

TEST_CASE("property: trajectory norm stays under the certified envelope") {
  std::mt19937_64 rng(0x57AB0002);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 12; ++trial) {
    const PeriodicSchedule s = testsupport::random_schedule(rng);
    const SystemMatrices mats = build_system_matrices(s);
    const StabilityReport report = classify(s, mats, {});
    if (report.classification != Classification::GES || !report.rate) continue;
    ++checked;
    const double alpha = std::sqrt(report.rate->sigma2 / report.rate->sigma1);
    const double log_rate = std::log(report.rate->rate_conservative);

    StateVector x0(s.n);
    for (int i = 0; i < s.n; ++i) x0(i) = testsupport::uniform01(rng);
    const Trajectory traj = simulate(mats, x0, 600);
    const double log_alpha_x0 = std::log(alpha) + std::log(x0.norm());
    for (long k = 0; k <= traj.steps(); ++k) {
      const double norm = traj.states[static_cast<size_t>(k)].norm();
      if (norm == 0.0) continue;
      CHECK(std::log(norm) <= log_alpha_x0 + static_cast<double>(k) * log_rate + 1e-9);
    }
  }
  CHECK(checked >= 12);
}

TEST_CASE("property: unstable schedules do not die out (necessity evidence)") {
  const PeriodicSchedule s = testsupport::two_cycle_p2_unstable();
  const SystemMatrices mats = build_system_matrices(s);
  StateVector x0(2);
  x0 << 1e-6, 0.0;
  const Trajectory traj = simulate(mats, x0, 20000);
  double min_norm = 1.0;
  for (const StateVector& x : traj.states)
    min_norm = std::min(min_norm, x.lpNorm<Eigen::Infinity>());
  CHECK(min_norm > 1e-8);
  CHECK(traj.back().lpNorm<Eigen::Infinity>() > 1e-4);  // grew away from the DFE
}

TEST_CASE("lifted_step: zero stays zero and p = 1 reduces to step") {
  const SystemMatrices mats = build_system_matrices(testsupport::two_cycle_p1(1.5));
  CHECK(lifted_step(mats, Eigen::VectorXd::Zero(2)).cwiseAbs().maxCoeff() == 0.0);

  StateVector x(2);
  x << 0.3, 0.7;
  const Eigen::VectorXd lifted = lifted_step(mats, x);
  const StateVector direct = step(mats, 0, x);
  CHECK((lifted - direct).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("property: lifted blocks reproduce the direct simulation") {
  std::mt19937_64 rng(0x57AB0003);
  for (int trial = 0; trial < 25; ++trial) {
    const PeriodicSchedule s = testsupport::random_schedule(rng);
    const SystemMatrices mats = build_system_matrices(s);
    StateVector x0(s.n);
    for (int i = 0; i < s.n; ++i) x0(i) = testsupport::uniform01(rng);

    const long q_steps = 50;
    const Eigen::VectorXd y0 = lifted_initial_state(mats, x0);
    const std::vector<Eigen::VectorXd> lifted = lifted_simulate(mats, y0, q_steps);
    const Trajectory direct = simulate(mats, x0, q_steps * s.p + s.p - 1);
    for (long q = 0; q <= q_steps; ++q)
      for (int block = 0; block < s.p; ++block) {
        const Eigen::VectorXd lhs = lifted[static_cast<size_t>(q)].segment(block * s.n, s.n);
        const StateVector& rhs = direct.states[static_cast<size_t>(q * s.p + block)];
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
      }
  }
}

TEST_CASE("property: finite-difference Jacobian of the lifted map is mtilde^p") {
  std::mt19937_64 rng(0x57AB0004);
  for (int trial = 0; trial < 10; ++trial) {
    testsupport::CorpusOptions small;
    small.max_n = 8;
    const PeriodicSchedule s = testsupport::random_schedule(rng, small);
    const SystemMatrices mats = build_system_matrices(s);
    const CyclicLift lift = cyclic_lift(mats);
    const Eigen::MatrixXd jac = lifted_jacobian_at_zero(mats);
    CHECK((jac - lift.mtilde_p).cwiseAbs().maxCoeff() <= 1e-6);
  }
}
