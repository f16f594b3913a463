#include "episim/system_matrices.hpp"

#include "episim/errors.hpp"

namespace episim {

SystemMatrices build_system_matrices(const PeriodicSchedule& schedule) {
  check_structure(schedule);

  SystemMatrices out;
  out.n = schedule.n;
  out.p = schedule.p;
  out.h = schedule.h;
  out.bbar.reserve(static_cast<size_t>(schedule.p));
  out.m.reserve(static_cast<size_t>(schedule.p));
  out.h_delta.reserve(static_cast<size_t>(schedule.p));

  for (const GraphPhase& phase : schedule.phases) {
    Eigen::MatrixXd bbar = Eigen::MatrixXd::Zero(schedule.n, schedule.n);
    for (const AdjacencyEntry& e : phase.adjacency)
      bbar(e.i, e.j) = phase.beta[static_cast<size_t>(e.i)] * e.weight;

    Eigen::VectorXd h_delta(schedule.n);
    for (int i = 0; i < schedule.n; ++i)
      h_delta(i) = schedule.h * phase.delta[static_cast<size_t>(i)];

    Eigen::MatrixXd m = schedule.h * bbar;
    m.diagonal().array() += 1.0;
    m.diagonal() -= h_delta;

    out.bbar.push_back(std::move(bbar));
    out.m.push_back(std::move(m));
    out.h_delta.push_back(std::move(h_delta));
  }
  return out;
}

}  // namespace episim
