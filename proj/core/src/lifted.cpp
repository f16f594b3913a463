#include "episim/lifted.hpp"

#include <string>

#include "episim/dynamics.hpp"
#include "episim/errors.hpp"

namespace episim {

Eigen::VectorXd lifted_step(const SystemMatrices& mats, const Eigen::VectorXd& y) {
  const int n = mats.n;
  const int p = mats.p;
  if (y.size() != static_cast<Eigen::Index>(n) * p)
    throw InvalidInput("lifted_step: expected a stacked state of length p*n = " +
                       std::to_string(static_cast<long>(n) * p));

  // Trajectory states the frozen matrices are evaluated at: the stacked
  // window itself, continued past it by the dynamics.
  std::vector<Eigen::VectorXd> s(static_cast<size_t>(2 * p - 1));
  for (int k = 0; k < p; ++k) s[static_cast<size_t>(k)] = y.segment(k * n, n);
  for (int k = p; k <= 2 * p - 2; ++k)
    s[static_cast<size_t>(k)] =
        detail::mhat_apply(mats, k - 1, s[static_cast<size_t>(k - 1)], s[static_cast<size_t>(k - 1)]);

  Eigen::VectorXd out(static_cast<Eigen::Index>(n) * p);
  for (int block = 0; block < p; ++block) {
    Eigen::VectorXd v = y.segment(block * n, n);
    for (int k = block; k < block + p; ++k)
      v = detail::mhat_apply(mats, k, s[static_cast<size_t>(k)], v);
    out.segment(block * n, n) = v;
  }
  return out;
}

Eigen::VectorXd lifted_initial_state(const SystemMatrices& mats, const Eigen::VectorXd& x0) {
  const Trajectory prefix = simulate(mats, x0, mats.p - 1);
  Eigen::VectorXd y(static_cast<Eigen::Index>(mats.n) * mats.p);
  for (int k = 0; k < mats.p; ++k) y.segment(k * mats.n, mats.n) = prefix.states[static_cast<size_t>(k)];
  return y;
}

std::vector<Eigen::VectorXd> lifted_simulate(const SystemMatrices& mats,
                                             const Eigen::VectorXd& y0, long q_steps) {
  if (q_steps < 0) throw InvalidInput("lifted_simulate: q_steps must be >= 0");
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<size_t>(q_steps) + 1);
  out.push_back(y0);
  for (long q = 0; q < q_steps; ++q) out.push_back(lifted_step(mats, out.back()));
  return out;
}

Eigen::MatrixXd lifted_jacobian_at_zero(const SystemMatrices& mats, double fd_step) {
  const Eigen::Index dim = static_cast<Eigen::Index>(mats.n) * mats.p;
  Eigen::MatrixXd jac(dim, dim);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    y(j) = fd_step;
    const Eigen::VectorXd plus = lifted_step(mats, y);
    y(j) = -fd_step;
    const Eigen::VectorXd minus = lifted_step(mats, y);
    y(j) = 0.0;
    jac.col(j) = (plus - minus) / (2.0 * fd_step);
  }
  return jac;
}

}  // namespace episim
