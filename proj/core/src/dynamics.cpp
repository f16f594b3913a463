#include "episim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "episim/errors.hpp"

namespace episim {

namespace {

int phase_index(int p, long k) {
  long r = k % p;
  if (r < 0) r += p;
  return static_cast<int>(r);
}

}  // namespace

namespace detail {

// Mhat(k) = I + h((I - diag(frozen)) bbar(k) - D(k)) applied to w.
StateVector mhat_apply(const SystemMatrices& mats, long k, const StateVector& frozen,
                       const StateVector& w) {
  const int phase = phase_index(mats.p, k);
  const Eigen::VectorXd infect = mats.bbar[static_cast<size_t>(phase)] * w;
  return w + mats.h * ((1.0 - frozen.array()) * infect.array()).matrix() -
         mats.h_delta[static_cast<size_t>(phase)].cwiseProduct(w);
}

}  // namespace detail

using detail::mhat_apply;

StateVector sanitize_state(const StateVector& x) {
  StateVector out = x;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double v = out(i);
    if (!std::isfinite(v) || v < -kStateTolerance || v > 1.0 + kStateTolerance)
      throw InvalidInput("state[" + std::to_string(i) + "] = " + std::to_string(v) +
                         " lies outside [0,1] beyond tolerance");
    out(i) = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

StateVector step(const SystemMatrices& mats, long k, const StateVector& x) {
  if (x.size() != mats.n)
    throw InvalidInput("step: state has length " + std::to_string(x.size()) + ", expected " +
                       std::to_string(mats.n));
  const StateVector xs = sanitize_state(x);
  return mhat_apply(mats, k, xs, xs);
}

StateVector step_scalar(const PeriodicSchedule& schedule, long k, const StateVector& x) {
  if (x.size() != schedule.n)
    throw InvalidInput("step_scalar: state has length " + std::to_string(x.size()) +
                       ", expected " + std::to_string(schedule.n));
  const StateVector xs = sanitize_state(x);
  const GraphPhase& phase = schedule.phases[static_cast<size_t>(phase_index(schedule.p, k))];

  Eigen::VectorXd neighbor_load = Eigen::VectorXd::Zero(schedule.n);
  for (const AdjacencyEntry& e : phase.adjacency) neighbor_load(e.i) += e.weight * xs(e.j);

  StateVector next(schedule.n);
  for (int i = 0; i < schedule.n; ++i) {
    const double beta = phase.beta[static_cast<size_t>(i)];
    const double delta = phase.delta[static_cast<size_t>(i)];
    next(i) = xs(i) + schedule.h * ((1.0 - xs(i)) * beta * neighbor_load(i) - delta * xs(i));
  }
  return next;
}

Trajectory simulate(const SystemMatrices& mats, const StateVector& x0, long steps) {
  if (steps < 0) throw InvalidInput("simulate: steps must be >= 0");
  Trajectory traj;
  traj.states.reserve(static_cast<size_t>(steps) + 1);
  traj.xbar.reserve(static_cast<size_t>(steps) + 1);

  StateVector x = sanitize_state(x0);
  traj.states.push_back(x);
  traj.xbar.push_back(x.mean());
  for (long k = 0; k < steps; ++k) {
    x = mhat_apply(mats, k, x, x);
    traj.states.push_back(x);
    traj.xbar.push_back(x.mean());
  }
  return traj;
}

Trajectory simulate(const PeriodicSchedule& schedule, const StateVector& x0, long steps) {
  return simulate(build_system_matrices(schedule), x0, steps);
}

}  // namespace episim
