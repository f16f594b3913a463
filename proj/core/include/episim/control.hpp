#pragma once

#include <Eigen/Core>
#include <vector>

#include "episim/schedule.hpp"
#include "episim/stability.hpp"

namespace episim {

/// Result of healing-rate synthesis. In every controlled phase the law
///   delta_i(k) = sum_j bbar_ij(k) + gamma_i
/// is applied exactly; uncontrolled phases keep fallback_delta. The plan is
/// feasible iff h*sum_j bbar_ij(k) + h*gamma_i <= 1 for every node and
/// every controlled phase; an infeasible gamma is reported, never clipped.
struct ControlPlan {
  Eigen::VectorXd gamma;
  std::vector<int> controlled_phases;
  Eigen::VectorXd fallback_delta;
  std::vector<Eigen::VectorXd> synthesized_delta;  ///< per phase
  bool feasible = false;
  double rho_monodromy = 0.0;              ///< of the controlled schedule
  Classification classification = Classification::INCONCLUSIVE;
};

struct SynthesisResult {
  ControlPlan plan;
  PeriodicSchedule schedule;  ///< controlled schedule, standard format
};

/// Applies the healing-rate law with per-node gains `gamma` on
/// `controlled_phases` (empty = all phases) and `fallback_delta` elsewhere
/// (empty = keep the schedule's deltas). The controlled schedule is always
/// re-classified; nothing is asserted stable beyond what the
/// classification reports.
SynthesisResult synthesize(const PeriodicSchedule& schedule, const Eigen::VectorXd& gamma,
                           std::vector<int> controlled_phases = {},
                           Eigen::VectorXd fallback_delta = {},
                           const ClassifyOptions& options = {});

/// Scalar-gain convenience overload.
SynthesisResult synthesize(const PeriodicSchedule& schedule, double gamma,
                           std::vector<int> controlled_phases = {},
                           Eigen::VectorXd fallback_delta = {},
                           const ClassifyOptions& options = {});

struct GammaSearch {
  double lo = 0.0;
  double hi = 0.0;
  double tol = 1e-6;   ///< on |rho - 1|
  int max_iters = 500;
};

struct MinimalGammaResult {
  double gamma_star = 0.0;
  double rho = 0.0;
  bool feasible = false;
  int evaluations = 0;
};

/// Bisects the homogeneous scalar gain for rho(monodromy) = 1. The
/// monodromy radius is non-increasing in gamma, so a valid bracket has
/// rho(lo) > 1 >= rho(hi); anything else throws InfeasibleRequest (in
/// particular rho(hi) > 1, i.e. even the largest allowed gain cannot
/// stabilize the scenario).
MinimalGammaResult minimal_gamma(const PeriodicSchedule& schedule,
                                 std::vector<int> controlled_phases,
                                 Eigen::VectorXd fallback_delta, const GammaSearch& search);

}  // namespace episim
