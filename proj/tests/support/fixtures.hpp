// Hand-derived schedule fixtures shared across the suites.
#pragma once

#include <vector>

#include "episim/schedule.hpp"

namespace testsupport {

// p = 1 two-node cycle with unit weights; h = 0.1, beta = 1.
// M = [[1 - 0.1*delta, 0.1], [0.1, 1 - 0.1*delta]].
inline episim::PeriodicSchedule two_cycle_p1(double delta) {
  episim::PeriodicSchedule s;
  s.n = 2;
  s.p = 1;
  s.h = 0.1;
  episim::GraphPhase phase;
  phase.adjacency = {{0, 1, 1.0}, {1, 0, 1.0}};
  phase.beta = {1.0, 1.0};
  phase.delta = {delta, delta};
  s.phases = {phase};
  return s;
}

// p = 2 two-node cycle with phase weights 1 and 2; h = 0.1, beta = 1,
// delta = 1 in both phases. M(0) = [[0.9, 0.1], [0.1, 0.9]],
// M(1) = [[0.9, 0.2], [0.2, 0.9]], rho(M(1) M(0)) = 1.10.
inline episim::PeriodicSchedule two_cycle_p2_unstable() {
  episim::PeriodicSchedule s;
  s.n = 2;
  s.p = 2;
  s.h = 0.1;
  episim::GraphPhase phase0;
  phase0.adjacency = {{0, 1, 1.0}, {1, 0, 1.0}};
  phase0.beta = {1.0, 1.0};
  phase0.delta = {1.0, 1.0};
  episim::GraphPhase phase1 = phase0;
  phase1.adjacency = {{0, 1, 2.0}, {1, 0, 2.0}};
  s.phases = {phase0, phase1};
  return s;
}

// Control fixture: same graphs as above but with free deltas; the gamma = 0
// healing law turns it into M(0) = [[0.9, 0.1], [0.1, 0.9]],
// M(1) = [[0.8, 0.2], [0.2, 0.8]] with rho(monodromy) = 1.
inline episim::PeriodicSchedule two_cycle_p2_control(double delta = 0.5) {
  episim::PeriodicSchedule s = two_cycle_p2_unstable();
  for (episim::GraphPhase& phase : s.phases) phase.delta = {delta, delta};
  return s;
}

// Single node with no edges: x' = (1 - h*delta) x.
inline episim::PeriodicSchedule scalar_decay(double h, double delta) {
  episim::PeriodicSchedule s;
  s.n = 1;
  s.p = 1;
  s.h = h;
  episim::GraphPhase phase;
  phase.beta = {1.0};
  phase.delta = {delta};
  s.phases = {phase};
  return s;
}

// Uniform-weight ring of n nodes (each node hears both neighbors), p
// phases, homogeneous beta = 1 and per-phase deltas. All matrices are
// circulant, so the monodromy spectrum has the closed form
//   prod_k (1 - h*delta_k + 2 h cos(2 pi j / n)),  j in [n].
inline episim::PeriodicSchedule ring_schedule(int n, double h,
                                              const std::vector<double>& delta_per_phase) {
  episim::PeriodicSchedule s;
  s.n = n;
  s.p = static_cast<int>(delta_per_phase.size());
  s.h = h;
  for (double d : delta_per_phase) {
    episim::GraphPhase phase;
    for (int i = 0; i < n; ++i) {
      phase.adjacency.push_back({i, (i + 1) % n, 1.0});
      phase.adjacency.push_back({i, (i - 1 + n) % n, 1.0});
    }
    phase.beta.assign(static_cast<size_t>(n), 1.0);
    phase.delta.assign(static_cast<size_t>(n), d);
    s.phases.push_back(std::move(phase));
  }
  return s;
}

}  // namespace testsupport
