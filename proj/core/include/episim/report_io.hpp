#pragma once

#include <string>

#include "episim/control.hpp"
#include "episim/dynamics.hpp"
#include "episim/experiments.hpp"
#include "episim/schedule.hpp"
#include "episim/stability.hpp"
#include "episim/validation.hpp"

namespace episim {

/// Schedule file format (JSON): top-level keys `n`, `p`, `h`, `phases`
/// (array of p objects with `adjacency` = array of [i, j, w] triples,
/// 0-based, edge j -> i; `beta` = array[n]; `delta` = array[n]) and
/// optional `labels` = array[n] of strings. With transpose=true the
/// triples are read as [j, i, w] to accommodate column-convention data.
PeriodicSchedule load_schedule_json(const std::string& path, bool transpose = false);
PeriodicSchedule parse_schedule_json(const std::string& text, bool transpose = false);
void save_schedule_json(const PeriodicSchedule& schedule, const std::string& path);
std::string schedule_to_json(const PeriodicSchedule& schedule);

SyntheticNetSpec load_synthetic_spec_json(const std::string& path);

std::string validation_report_to_json(const ValidationReport& report);
std::string stability_report_to_json(const StabilityReport& report);
std::string control_plan_to_json(const ControlPlan& plan);
std::string minimal_gamma_to_json(const MinimalGammaResult& result);
std::string cycle_report_to_json(const CycleReport& report);

/// Trajectory CSV: header `k,x_0,...,x_{n-1},xbar`, one row per step.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

/// Node color channel c_i(k) = x_i * r + (1 - x_i) * b, one row per node
/// per sampled step: `k,node,channel`.
void write_color_csv(const Trajectory& traj, const std::string& path, double r = 1.0,
                     double b = 0.0, long sample_every = 1);

/// Sweep CSV: `param_value,rho,classification,converged,hitting_step,empirical_rate`.
void write_sweep_csv(const SweepReport& report, const std::string& path);
std::string sweep_report_to_json(const SweepReport& report);

/// Per-value average infection level series: `param_value,k,xbar`.
void write_sweep_xbar_csv(const SweepReport& report, const std::string& path);

/// Writes `text` to `path`, throwing InvalidInput on failure.
void write_text_file_checked(const std::string& path, const std::string& text);

}  // namespace episim
