#pragma once

#include <string>
#include <vector>

namespace episim {

/// One directed weighted edge of a phase graph.
///
/// The entry (i, j, weight) sets a_ij = weight, i.e. an edge FROM node j
/// TO node i. Row index first. This matches the convention used by the
/// schedule file format; loaders offer a transpose switch for data that
/// arrives column-major.
struct AdjacencyEntry {
  int i = 0;       ///< target node (row)
  int j = 0;       ///< source node (column)
  double weight = 0.0;
};

/// Parameters of the network during one phase of the period: the directed
/// contact graph plus per-node infection and healing rates.
struct GraphPhase {
  std::vector<AdjacencyEntry> adjacency;
  std::vector<double> beta;   ///< per-node infection rates, >= 0
  std::vector<double> delta;  ///< per-node healing rates, >= 0
};

/// Full description of a periodic time-varying SIS system: n nodes,
/// period p (in steps), Euler sampling parameter h, and one GraphPhase
/// per step of the period. Phase k applies at all times t with
/// t mod p == k.
struct PeriodicSchedule {
  int n = 0;
  int p = 0;
  double h = 0.0;
  std::vector<GraphPhase> phases;
  std::vector<std::string> labels;  ///< optional display names, empty or size n

  bool has_labels() const { return !labels.empty(); }
};

/// Verifies the structural (type-level) invariants: p >= 1, h > 0,
/// exactly p phases, beta/delta of length n with nonnegative entries,
/// edge indices in range, weights strictly positive and finite, no
/// duplicate (i, j) pairs. Throws InvalidInput on the first violation.
void check_structure(const PeriodicSchedule& schedule);

/// Weighted in-degree of node i in phase k: sum_j a_ij.
double weighted_in_degree(const GraphPhase& phase, int node);

/// max over phases and nodes of sum_j beta_i * a_ij (the quantity that
/// Assumption 3 bounds by 1/h), and max over phases/nodes of delta.
double max_scaled_in_degree(const PeriodicSchedule& schedule);
double max_delta(const PeriodicSchedule& schedule);

}  // namespace episim
