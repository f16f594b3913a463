#pragma once

#include <Eigen/Core>
#include <vector>

#include "episim/schedule.hpp"

namespace episim {

/// Dense per-phase matrices derived from a schedule:
///   bbar[k]   = B(k) A(k), entries bbar_ij = beta_i * a_ij
///   m[k]      = I - h D(k) + h bbar[k]   (DFE linearization of one step)
///   h_delta[k] = h * delta(k)            (diagonal of h D(k))
/// Under A2-A3 every m[k] is entrywise nonnegative.
struct SystemMatrices {
  int n = 0;
  int p = 0;
  double h = 0.0;
  std::vector<Eigen::MatrixXd> bbar;
  std::vector<Eigen::MatrixXd> m;
  std::vector<Eigen::VectorXd> h_delta;
};

SystemMatrices build_system_matrices(const PeriodicSchedule& schedule);

}  // namespace episim
