#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "episim/dynamics.hpp"
#include "episim/schedule.hpp"
#include "episim/stability.hpp"

namespace episim {

/// Random per-phase overlay on top of the base ring: each ordered pair
/// (i, j), i != j, gets a directed edge with probability edge_prob and a
/// weight uniform in [weight_min, weight_max].
struct OverlaySpec {
  double edge_prob = 0.0;
  double weight_min = 1.0;
  double weight_max = 1.0;
};

/// Generator spec for synthetic periodic networks shaped like the flight
/// study: a binary nearest-neighbor ring (width `ring_width`, always
/// present) plus p random directed overlays, homogeneous beta and delta.
/// With h_auto the sampling parameter is set to 1/max(delta, max weighted
/// in-degree of bbar), the largest h that meets Assumption 3.
struct SyntheticNetSpec {
  int n = 0;
  int ring_width = 1;
  int p = 1;
  OverlaySpec overlay;
  double beta = 1.0;
  double delta = 1.0;
  double h = 0.0;
  bool h_auto = true;
};

struct GenerationInfo {
  double max_weighted_in_degree = 0.0;  ///< of bbar, over phases and nodes
  double h = 0.0;
};

/// Deterministic function of (spec, seed); the result always passes A2-A3.
/// Throws InvalidInput when the spec admits no transmission edge at all
/// (A4 would fail in every phase; regenerate with a higher edge_prob or a
/// positive ring width).
PeriodicSchedule generate_synthetic(const SyntheticNetSpec& spec, std::uint64_t seed,
                                    GenerationInfo* info = nullptr);

/// Initial-condition grammar: "zero" | "node:<i>" | "uniform:<c>" |
/// "file:<path>" (one value per line or comma separated).
StateVector parse_init_spec(const std::string& spec, int n);

struct ConvergenceStats {
  bool converged = false;
  long hitting_step = -1;     ///< first k with ||x(k)||_inf < tol, -1 if never
  double empirical_rate = 0.0;  ///< per-step geometric decay of ||x|| measured
                                ///< over whole periods in the last half of the run
};

ConvergenceStats detect_convergence(const Trajectory& traj, int p, double tol = 1e-6);

struct CycleReport {
  bool detected = false;
  int period = 0;                     ///< in steps, a multiple of p
  std::vector<StateVector> states;    ///< the detected cycle, length `period`
  long burn_in = 0;
  double max_deviation = 0.0;         ///< max ||x(k+period) - x(k)||_inf post burn-in
  bool fixed_point = false;           ///< the cycle is a single repeated state
};

inline constexpr double kDefaultCycleTol = 1e-8;

/// Tests candidate periods p, 2p, ... (up to max_multiple) on the
/// post-burn-in window; detects at the smallest period whose deviation
/// stays within cycle_tol. Undetected is a valid outcome. The trajectory
/// must be at least burn_in + 4p steps long.
CycleReport detect_limit_cycle(const Trajectory& traj, int p, long burn_in,
                               double cycle_tol = kDefaultCycleTol, int max_multiple = 16);

/// Burn-in heuristic 10 * p / (1 - rho_hat), capped at 100000 steps.
long default_burn_in(int p, double rho_hat);

enum class SweepParameter { DeltaScalar, GammaScalar, StepSize };

const char* to_string(SweepParameter p);

struct SweepRow {
  double value = 0.0;
  bool valid = false;          ///< instantiated schedule passed A2-A3
  double rho = 0.0;
  Classification classification = Classification::INCONCLUSIVE;
  bool converged = false;
  long hitting_step = -1;
  double empirical_rate = 0.0;
  std::vector<double> xbar;    ///< average infection level over time
};

struct SweepConfig {
  long steps = 2000;
  StateVector x0;              ///< empty = uniform 1/2
  double convergence_tol = 1e-6;
  ClassifyOptions classify_options{.tol_eq = 1e-9, .jsr_depth = 4, .with_certificate = false};
};

struct SweepReport {
  SweepParameter parameter = SweepParameter::DeltaScalar;
  std::vector<SweepRow> rows;
};

/// Instantiates the template once per value (delta: every delta_i(k) set
/// to the value; gamma: full-phase healing-rate law with that scalar gain;
/// h: the step size replaced), re-validates, classifies and simulates.
/// Values violating A2-A3 are reported as invalid rows, the sweep carries
/// on.
SweepReport sweep(const PeriodicSchedule& schedule, SweepParameter parameter,
                  const std::vector<double>& values, const SweepConfig& config = {});

}  // namespace episim
