#pragma once

#include <Eigen/Core>
#include <vector>

#include "episim/system_matrices.hpp"

namespace episim {

/// Time-invariant reformulation of the p-periodic dynamics on the stacked
/// state y(pq) = [x(pq); x(pq+1); ...; x(pq+p-1)].
///
/// One lifted step advances every block by one full period:
/// block i of the result is Mhat(i+p-2) ... Mhat(i-1) applied to block i,
/// where Mhat(k) w = w + h((1 - s_k) .* (bbar(k mod p) w) - delta .* w)
/// is the one-step matrix frozen at the trajectory state s_k. The states
/// s_p, ..., s_{2p-2} past the stacked window are obtained by continuing
/// the dynamics from the last block. For a y built from an actual
/// trajectory prefix the blocks reproduce the direct simulation exactly;
/// the map itself is defined for arbitrary real y (no clamping), and its
/// Jacobian at y = 0 is mtilde^p.
Eigen::VectorXd lifted_step(const SystemMatrices& mats, const Eigen::VectorXd& y);

/// Stacks x(0..p-1) of a direct simulation from x0 into the lifted state.
Eigen::VectorXd lifted_initial_state(const SystemMatrices& mats, const Eigen::VectorXd& x0);

/// Iterates lifted_step q_steps times; returns y(0), y(p), ..., y(p*q_steps).
std::vector<Eigen::VectorXd> lifted_simulate(const SystemMatrices& mats,
                                             const Eigen::VectorXd& y0, long q_steps);

/// Central-difference Jacobian of the lifted map at y = 0 (step `fd_step`);
/// matches mtilde^p to O(fd_step^2).
Eigen::MatrixXd lifted_jacobian_at_zero(const SystemMatrices& mats, double fd_step = 1e-6);

}  // namespace episim
