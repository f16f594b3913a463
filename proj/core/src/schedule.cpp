#include "episim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "episim/errors.hpp"

namespace episim {

namespace {

std::string at_phase(int k) { return " (phase " + std::to_string(k) + ")"; }

}  // namespace

void check_structure(const PeriodicSchedule& schedule) {
  if (schedule.n < 1) throw InvalidInput("schedule: n must be >= 1");
  if (schedule.p < 1) throw InvalidInput("schedule: period p must be >= 1");
  if (!(schedule.h > 0.0) || !std::isfinite(schedule.h))
    throw InvalidInput("schedule: h must be positive and finite");
  if (static_cast<int>(schedule.phases.size()) != schedule.p)
    throw InvalidInput("schedule: expected exactly p = " + std::to_string(schedule.p) +
                       " phases, got " + std::to_string(schedule.phases.size()));
  if (!schedule.labels.empty() && static_cast<int>(schedule.labels.size()) != schedule.n)
    throw InvalidInput("schedule: labels must be empty or of length n");

  const int n = schedule.n;
  for (int k = 0; k < schedule.p; ++k) {
    const GraphPhase& phase = schedule.phases[static_cast<size_t>(k)];
    if (static_cast<int>(phase.beta.size()) != n)
      throw InvalidInput("schedule: beta length mismatch" + at_phase(k));
    if (static_cast<int>(phase.delta.size()) != n)
      throw InvalidInput("schedule: delta length mismatch" + at_phase(k));
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(phase.beta[static_cast<size_t>(i)]) ||
          phase.beta[static_cast<size_t>(i)] < 0.0)
        throw InvalidInput("schedule: beta[" + std::to_string(i) + "] negative or non-finite" +
                           at_phase(k));
      if (!std::isfinite(phase.delta[static_cast<size_t>(i)]) ||
          phase.delta[static_cast<size_t>(i)] < 0.0)
        throw InvalidInput("schedule: delta[" + std::to_string(i) + "] negative or non-finite" +
                           at_phase(k));
    }
    std::set<std::pair<int, int>> seen;
    for (const AdjacencyEntry& e : phase.adjacency) {
      if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
        throw InvalidInput("schedule: edge index out of range" + at_phase(k));
      if (!std::isfinite(e.weight) || e.weight <= 0.0)
        throw InvalidInput("schedule: edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                           ") must have positive finite weight" + at_phase(k));
      if (!seen.insert({e.i, e.j}).second)
        throw InvalidInput("schedule: duplicate edge (" + std::to_string(e.i) + "," +
                           std::to_string(e.j) + ")" + at_phase(k));
    }
  }
}

double weighted_in_degree(const GraphPhase& phase, int node) {
  double sum = 0.0;
  for (const AdjacencyEntry& e : phase.adjacency)
    if (e.i == node) sum += e.weight;
  return sum;
}

double max_scaled_in_degree(const PeriodicSchedule& schedule) {
  double worst = 0.0;
  for (const GraphPhase& phase : schedule.phases) {
    std::vector<double> row_sum(static_cast<size_t>(schedule.n), 0.0);
    for (const AdjacencyEntry& e : phase.adjacency)
      row_sum[static_cast<size_t>(e.i)] += phase.beta[static_cast<size_t>(e.i)] * e.weight;
    for (double s : row_sum) worst = std::max(worst, s);
  }
  return worst;
}

double max_delta(const PeriodicSchedule& schedule) {
  double worst = 0.0;
  for (const GraphPhase& phase : schedule.phases)
    for (double d : phase.delta) worst = std::max(worst, d);
  return worst;
}

}  // namespace episim
