#pragma once

#include <Eigen/Core>
#include <vector>

#include "episim/schedule.hpp"
#include "episim/system_matrices.hpp"

namespace episim {

using StateVector = Eigen::VectorXd;

/// Entries within this distance of [0,1] are clamped; anything farther out
/// is rejected as a caller bug.
inline constexpr double kStateTolerance = 1e-12;

/// Returns x clamped to [0,1]^n. Throws InvalidInput if any entry lies
/// more than kStateTolerance outside.
StateVector sanitize_state(const StateVector& x);

/// One step of the SIS dynamics in matrix form,
///   x(k+1) = x(k) + h((I - X(k)) bbar(k) - D(k)) x(k),
/// using phase `k mod p`. Input is sanitized; the result stays in [0,1]^n
/// whenever A2-A3 hold, and step(0) == 0 exactly.
StateVector step(const SystemMatrices& mats, long k, const StateVector& x);

/// Same update evaluated in per-node scalar form straight off the
/// adjacency list,
///   x_i(k+1) = x_i + h((1-x_i) beta_i sum_j a_ij x_j - delta_i x_i).
/// Agrees with step() to rounding; kept as the second route for tests and
/// for callers that never build dense matrices.
StateVector step_scalar(const PeriodicSchedule& schedule, long k, const StateVector& x);

struct Trajectory {
  std::vector<StateVector> states;  ///< length steps+1, states[k] = x(k)
  std::vector<double> xbar;         ///< per-step averages, same length

  long steps() const { return static_cast<long>(states.size()) - 1; }
  const StateVector& back() const { return states.back(); }
};

/// Iterates step() for `steps` steps from x0 (phase k mod p at step k).
Trajectory simulate(const SystemMatrices& mats, const StateVector& x0, long steps);
Trajectory simulate(const PeriodicSchedule& schedule, const StateVector& x0, long steps);

namespace detail {
/// Unvalidated action of the one-step matrix Mhat(k) frozen at state
/// `frozen` on an arbitrary vector w; step(x) equals this with
/// frozen = w = x. The lifted reformulation shares this expression so its
/// blocks match direct simulation bitwise.
StateVector mhat_apply(const SystemMatrices& mats, long k, const StateVector& frozen,
                       const StateVector& w);
}  // namespace detail

}  // namespace episim
