#include "episim/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "episim/errors.hpp"
#include "episim/spectral.hpp"
#include "episim/system_matrices.hpp"

namespace episim {

namespace {

std::vector<int> normalize_phases(const PeriodicSchedule& schedule, std::vector<int> phases) {
  if (phases.empty()) {
    phases.resize(static_cast<size_t>(schedule.p));
    for (int k = 0; k < schedule.p; ++k) phases[static_cast<size_t>(k)] = k;
    return phases;
  }
  std::set<int> unique;
  for (int k : phases) {
    if (k < 0 || k >= schedule.p)
      throw InvalidInput("control: phase index " + std::to_string(k) + " out of range");
    unique.insert(k);
  }
  return {unique.begin(), unique.end()};
}

// Row sums of bbar(k), accumulated in adjacency order so that callers can
// reproduce delta = row_sum + gamma bit for bit.
Eigen::VectorXd bbar_row_sums(const PeriodicSchedule& schedule, int k) {
  const GraphPhase& phase = schedule.phases[static_cast<size_t>(k)];
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(schedule.n);
  for (const AdjacencyEntry& e : phase.adjacency)
    sums(e.i) += phase.beta[static_cast<size_t>(e.i)] * e.weight;
  return sums;
}

struct AppliedLaw {
  PeriodicSchedule schedule;
  bool feasible = true;
};

AppliedLaw apply_healing_law(const PeriodicSchedule& schedule, const Eigen::VectorXd& gamma,
                             const std::vector<int>& phases,
                             const Eigen::VectorXd& fallback_delta) {
  AppliedLaw out;
  out.schedule = schedule;

  std::vector<char> controlled(static_cast<size_t>(schedule.p), 0);
  for (int k : phases) controlled[static_cast<size_t>(k)] = 1;

  for (int k = 0; k < schedule.p; ++k) {
    GraphPhase& phase = out.schedule.phases[static_cast<size_t>(k)];
    if (controlled[static_cast<size_t>(k)]) {
      const Eigen::VectorXd sums = bbar_row_sums(schedule, k);
      for (int i = 0; i < schedule.n; ++i) {
        phase.delta[static_cast<size_t>(i)] = sums(i) + gamma(i);
        if (schedule.h * sums(i) + schedule.h * gamma(i) > 1.0) out.feasible = false;
      }
    } else if (fallback_delta.size() > 0) {
      for (int i = 0; i < schedule.n; ++i)
        phase.delta[static_cast<size_t>(i)] = fallback_delta(i);
    }
  }
  return out;
}

}  // namespace

SynthesisResult synthesize(const PeriodicSchedule& schedule, const Eigen::VectorXd& gamma,
                           std::vector<int> controlled_phases, Eigen::VectorXd fallback_delta,
                           const ClassifyOptions& options) {
  check_structure(schedule);
  if (gamma.size() != schedule.n)
    throw InvalidInput("synthesize: gamma must have one entry per node");
  if (!gamma.allFinite() || (gamma.array() < 0.0).any())
    throw InvalidInput("synthesize: gamma must be finite and nonnegative");
  if (fallback_delta.size() > 0 &&
      (fallback_delta.size() != schedule.n || (fallback_delta.array() < 0.0).any()))
    throw InvalidInput("synthesize: fallback_delta must be empty or nonnegative of length n");

  const std::vector<int> phases = normalize_phases(schedule, std::move(controlled_phases));
  AppliedLaw applied = apply_healing_law(schedule, gamma, phases, fallback_delta);

  SynthesisResult result;
  result.schedule = std::move(applied.schedule);
  result.plan.gamma = gamma;
  result.plan.controlled_phases = phases;
  result.plan.fallback_delta = std::move(fallback_delta);
  result.plan.feasible = applied.feasible;
  result.plan.synthesized_delta.reserve(static_cast<size_t>(schedule.p));
  for (const GraphPhase& phase : result.schedule.phases) {
    Eigen::VectorXd d(schedule.n);
    for (int i = 0; i < schedule.n; ++i) d(i) = phase.delta[static_cast<size_t>(i)];
    result.plan.synthesized_delta.push_back(std::move(d));
  }

  // Never asserted stable: the controlled schedule is re-classified, and an
  // infeasible plan (which may violate A3) is reported as such.
  const ValidationReport val = validate_schedule(result.schedule, false);
  if (val.core_ok()) {
    const SystemMatrices mats = build_system_matrices(result.schedule);
    const StabilityReport report = classify(result.schedule, mats, options);
    result.plan.rho_monodromy = report.rho_monodromy;
    result.plan.classification = report.classification;
  } else {
    result.plan.rho_monodromy = std::numeric_limits<double>::quiet_NaN();
    result.plan.classification = Classification::INCONCLUSIVE;
  }
  return result;
}

SynthesisResult synthesize(const PeriodicSchedule& schedule, double gamma,
                           std::vector<int> controlled_phases, Eigen::VectorXd fallback_delta,
                           const ClassifyOptions& options) {
  return synthesize(schedule, Eigen::VectorXd::Constant(schedule.n, gamma),
                    std::move(controlled_phases), std::move(fallback_delta), options);
}

MinimalGammaResult minimal_gamma(const PeriodicSchedule& schedule,
                                 std::vector<int> controlled_phases,
                                 Eigen::VectorXd fallback_delta, const GammaSearch& search) {
  check_structure(schedule);
  if (!(search.lo >= 0.0) || !(search.hi > search.lo))
    throw InvalidInput("minimal_gamma: need 0 <= lo < hi");
  if (!(search.tol > 0.0)) throw InvalidInput("minimal_gamma: tol must be positive");

  const std::vector<int> phases = normalize_phases(schedule, std::move(controlled_phases));

  MinimalGammaResult result;
  auto rho_at = [&](double g) {
    const Eigen::VectorXd gamma = Eigen::VectorXd::Constant(schedule.n, g);
    const AppliedLaw applied = apply_healing_law(schedule, gamma, phases, fallback_delta);
    ++result.evaluations;
    return monodromy(build_system_matrices(applied.schedule)).radius();
  };

  const double rho_lo = rho_at(search.lo);
  const double rho_hi = rho_at(search.hi);
  if (rho_hi > 1.0)
    throw InfeasibleRequest("minimal_gamma: rho(hi) = " + std::to_string(rho_hi) +
                            " > 1, scenario uncontrollable within the bracket");
  if (!(rho_lo > 1.0))
    throw InfeasibleRequest("minimal_gamma: rho(lo) = " + std::to_string(rho_lo) +
                            " <= 1, bracket does not straddle the threshold");

  double lo = search.lo;
  double hi = search.hi;
  for (int it = 0; it < search.max_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double rho_mid = rho_at(mid);
    if (std::abs(rho_mid - 1.0) <= search.tol) {
      result.gamma_star = mid;
      result.rho = rho_mid;
      const Eigen::VectorXd gamma = Eigen::VectorXd::Constant(schedule.n, mid);
      result.feasible = apply_healing_law(schedule, gamma, phases, fallback_delta).feasible;
      return result;
    }
    if (rho_mid > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  throw NumericalBreakdown("minimal_gamma: bisection did not reach |rho - 1| <= tol");
}

}  // namespace episim
