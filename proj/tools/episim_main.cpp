// Command-line front end: schedule validation, stability analysis,
// simulation, healing-rate synthesis, sweeps, synthetic generation and
// limit-cycle detection. Exit codes: 0 success, 1 invalid input or
// numerical failure, 2 infeasible/uncontrollable request. Stability
// verdicts are data in the JSON output, never exit codes.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "episim/control.hpp"
#include "episim/dynamics.hpp"
#include "episim/errors.hpp"
#include "episim/experiments.hpp"
#include "episim/report_io.hpp"
#include "episim/spectral.hpp"
#include "episim/stability.hpp"
#include "episim/system_matrices.hpp"
#include "episim/validation.hpp"

namespace {

struct ScheduleArgs {
  std::string path;
  bool transpose = false;
};

void add_schedule_options(CLI::App* cmd, ScheduleArgs& args) {
  cmd->add_option("schedule", args.path, "schedule JSON file")->required();
  cmd->add_flag("--transpose", args.transpose,
                "read adjacency triples as [j, i, w] (column convention)");
}

Eigen::VectorXd broadcast(const std::vector<double>& values, int n, const char* what) {
  if (values.size() == 1) return Eigen::VectorXd::Constant(n, values.front());
  if (static_cast<int>(values.size()) == n)
    return Eigen::Map<const Eigen::VectorXd>(values.data(), n);
  throw episim::InvalidInput(std::string(what) + ": give one value or one per node");
}

int run(int argc, char** argv) {
  CLI::App app{"periodic SIS epidemic analysis and healing-rate control"};
  app.require_subcommand(1);

  // validate
  ScheduleArgs val_args;
  CLI::App* cmd_validate = app.add_subcommand("validate", "check assumptions A1-A5");
  add_schedule_options(cmd_validate, val_args);

  // analyze
  ScheduleArgs ana_args;
  int jsr_depth = 4;
  double tol_eq = 1e-9;
  bool no_certificate = false;
  std::string ana_out;
  CLI::App* cmd_analyze = app.add_subcommand("analyze", "classify the disease-free equilibrium");
  add_schedule_options(cmd_analyze, ana_args);
  cmd_analyze->add_option("--jsr-depth", jsr_depth, "product length for the JSR bounds")
      ->check(CLI::Range(1, 12));
  cmd_analyze->add_option("--tol-eq", tol_eq, "relative width of the rho = 1 band")
      ->check(CLI::PositiveNumber);
  cmd_analyze->add_flag("--no-certificate", no_certificate, "skip the Lyapunov certificate");
  cmd_analyze->add_option("--out", ana_out, "write the report here instead of stdout");

  // simulate
  ScheduleArgs sim_args;
  std::string sim_init = "zero";
  long sim_steps = 0;
  std::string sim_out, sim_color_out;
  long color_every = 1;
  CLI::App* cmd_simulate = app.add_subcommand("simulate", "run the dynamics, write CSV");
  add_schedule_options(cmd_simulate, sim_args);
  cmd_simulate->add_option("--init", sim_init, "zero | node:<i> | uniform:<c> | file:<path>")
      ->required();
  cmd_simulate->add_option("--steps", sim_steps, "number of steps")->required()
      ->check(CLI::NonNegativeNumber);
  cmd_simulate->add_option("--out", sim_out, "trajectory CSV path")->required();
  cmd_simulate->add_option("--color-out", sim_color_out, "node color channel CSV path");
  cmd_simulate->add_option("--color-every", color_every, "sample stride for the color CSV")
      ->check(CLI::PositiveNumber);

  // synthesize
  ScheduleArgs syn_args;
  std::vector<double> syn_gamma;
  std::vector<int> syn_phases;
  std::vector<double> syn_fallback;
  std::string syn_out, syn_plan_out;
  CLI::App* cmd_synthesize =
      app.add_subcommand("synthesize", "apply the healing-rate law, write controlled schedule");
  add_schedule_options(cmd_synthesize, syn_args);
  cmd_synthesize->add_option("--gamma", syn_gamma, "gain (scalar or per node)")
      ->required()->delimiter(',');
  cmd_synthesize->add_option("--phases", syn_phases, "controlled phases (default: all)")
      ->delimiter(',');
  cmd_synthesize
      ->add_option("--fallback-delta", syn_fallback,
                   "healing rates for uncontrolled phases (default: keep)")
      ->delimiter(',');
  cmd_synthesize->add_option("--out", syn_out, "controlled schedule JSON path")->required();
  cmd_synthesize->add_option("--plan-out", syn_plan_out,
                             "write the plan here in addition to stdout");

  // min-gamma
  ScheduleArgs mg_args;
  std::vector<int> mg_phases;
  std::vector<double> mg_fallback;
  double mg_lo = 0.0, mg_hi = 0.0, mg_tol = 1e-6;
  CLI::App* cmd_min_gamma =
      app.add_subcommand("min-gamma", "bisect the scalar gain for rho(monodromy) = 1");
  add_schedule_options(cmd_min_gamma, mg_args);
  cmd_min_gamma->add_option("--phases", mg_phases, "controlled phases (default: all)")
      ->delimiter(',');
  cmd_min_gamma
      ->add_option("--fallback-delta", mg_fallback,
                   "healing rates for uncontrolled phases (default: keep)")
      ->delimiter(',');
  cmd_min_gamma->add_option("--lo", mg_lo, "bracket lower end")->required();
  cmd_min_gamma->add_option("--hi", mg_hi, "bracket upper end")->required();
  cmd_min_gamma->add_option("--tol", mg_tol, "tolerance on |rho - 1|")
      ->check(CLI::PositiveNumber);

  // sweep
  ScheduleArgs sw_args;
  std::string sw_param;
  std::vector<double> sw_values;
  long sw_steps = 2000;
  std::string sw_init = "uniform:0.5";
  std::string sw_out, sw_xbar_out;
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "classify and simulate over a parameter grid");
  add_schedule_options(cmd_sweep, sw_args);
  cmd_sweep->add_option("--param", sw_param, "delta | gamma | h")->required()
      ->check(CLI::IsMember({"delta", "gamma", "h"}));
  cmd_sweep->add_option("--values", sw_values, "comma-separated parameter values")
      ->required()->delimiter(',');
  cmd_sweep->add_option("--steps", sw_steps, "simulation steps per value")
      ->check(CLI::PositiveNumber);
  cmd_sweep->add_option("--init", sw_init, "initial condition spec");
  cmd_sweep->add_option("--out", sw_out, "sweep CSV path");
  cmd_sweep->add_option("--xbar-out", sw_xbar_out, "per-value average infection CSV path");

  // generate
  std::string gen_spec_path, gen_out;
  std::uint64_t gen_seed = 0;
  CLI::App* cmd_generate = app.add_subcommand("generate", "build a synthetic periodic schedule");
  cmd_generate->add_option("--spec", gen_spec_path, "generator spec JSON")->required();
  cmd_generate->add_option("--seed", gen_seed, "RNG seed")->required();
  cmd_generate->add_option("--out", gen_out, "schedule JSON path")->required();

  // cycle
  ScheduleArgs cyc_args;
  std::string cyc_init;
  long cyc_steps = 0;
  long cyc_burn_in = -1;
  double cyc_tol = episim::kDefaultCycleTol;
  int cyc_max_multiple = 16;
  CLI::App* cmd_cycle = app.add_subcommand("cycle", "detect a limit cycle empirically");
  add_schedule_options(cmd_cycle, cyc_args);
  cmd_cycle->add_option("--init", cyc_init, "initial condition spec")->required();
  cmd_cycle->add_option("--steps", cyc_steps, "simulation steps")->required()
      ->check(CLI::PositiveNumber);
  cmd_cycle->add_option("--burn-in", cyc_burn_in, "steps to discard (default: heuristic)");
  cmd_cycle->add_option("--cycle-tol", cyc_tol, "detection tolerance")
      ->check(CLI::PositiveNumber);
  cmd_cycle->add_option("--max-multiple", cyc_max_multiple, "largest period multiple tried")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (cmd_validate->parsed()) {
    const episim::PeriodicSchedule schedule =
        episim::load_schedule_json(val_args.path, val_args.transpose);
    const episim::ValidationReport report = episim::validate_schedule(schedule);
    std::cout << episim::validation_report_to_json(report);
    return report.core_ok() ? 0 : 1;
  }

  if (cmd_analyze->parsed()) {
    const episim::PeriodicSchedule schedule =
        episim::load_schedule_json(ana_args.path, ana_args.transpose);
    const episim::SystemMatrices mats = episim::build_system_matrices(schedule);
    episim::ClassifyOptions options;
    options.tol_eq = tol_eq;
    options.jsr_depth = jsr_depth;
    options.with_certificate = !no_certificate;
    const episim::StabilityReport report = episim::classify(schedule, mats, options);
    const std::string text = episim::stability_report_to_json(report);
    if (ana_out.empty())
      std::cout << text;
    else
      episim::write_text_file_checked(ana_out, text);
    return 0;
  }

  if (cmd_simulate->parsed()) {
    const episim::PeriodicSchedule schedule =
        episim::load_schedule_json(sim_args.path, sim_args.transpose);
    episim::validate_schedule(schedule, /*strict=*/true);
    const episim::StateVector x0 = episim::parse_init_spec(sim_init, schedule.n);
    const episim::Trajectory traj = episim::simulate(schedule, x0, sim_steps);
    episim::write_trajectory_csv(traj, sim_out);
    if (!sim_color_out.empty())
      episim::write_color_csv(traj, sim_color_out, 1.0, 0.0, color_every);
    return 0;
  }

  if (cmd_synthesize->parsed()) {
    const episim::PeriodicSchedule schedule =
        episim::load_schedule_json(syn_args.path, syn_args.transpose);
    episim::validate_schedule(schedule, /*strict=*/true);
    const Eigen::VectorXd gamma = broadcast(syn_gamma, schedule.n, "--gamma");
    Eigen::VectorXd fallback;
    if (!syn_fallback.empty()) fallback = broadcast(syn_fallback, schedule.n, "--fallback-delta");
    const episim::SynthesisResult result =
        episim::synthesize(schedule, gamma, syn_phases, fallback);
    episim::save_schedule_json(result.schedule, syn_out);
    const std::string plan = episim::control_plan_to_json(result.plan);
    std::cout << plan;
    if (!syn_plan_out.empty()) episim::write_text_file_checked(syn_plan_out, plan);
    return result.plan.feasible ? 0 : 2;
  }

  if (cmd_min_gamma->parsed()) {
    const episim::PeriodicSchedule schedule =
        episim::load_schedule_json(mg_args.path, mg_args.transpose);
    episim::validate_schedule(schedule, /*strict=*/true);
    Eigen::VectorXd fallback;
    if (!mg_fallback.empty()) fallback = broadcast(mg_fallback, schedule.n, "--fallback-delta");
    episim::GammaSearch search;
    search.lo = mg_lo;
    search.hi = mg_hi;
    search.tol = mg_tol;
    const episim::MinimalGammaResult result =
        episim::minimal_gamma(schedule, mg_phases, fallback, search);
    std::cout << episim::minimal_gamma_to_json(result);
    return 0;
  }

  if (cmd_sweep->parsed()) {
    const episim::PeriodicSchedule schedule =
        episim::load_schedule_json(sw_args.path, sw_args.transpose);
    episim::validate_schedule(schedule, /*strict=*/true);
    episim::SweepParameter param = episim::SweepParameter::DeltaScalar;
    if (sw_param == "gamma") param = episim::SweepParameter::GammaScalar;
    if (sw_param == "h") param = episim::SweepParameter::StepSize;
    episim::SweepConfig config;
    config.steps = sw_steps;
    config.x0 = episim::parse_init_spec(sw_init, schedule.n);
    const episim::SweepReport report = episim::sweep(schedule, param, sw_values, config);
    if (!sw_out.empty()) episim::write_sweep_csv(report, sw_out);
    if (!sw_xbar_out.empty()) episim::write_sweep_xbar_csv(report, sw_xbar_out);
    if (sw_out.empty() && sw_xbar_out.empty())
      std::cout << episim::sweep_report_to_json(report);
    return 0;
  }

  if (cmd_generate->parsed()) {
    const episim::SyntheticNetSpec spec = episim::load_synthetic_spec_json(gen_spec_path);
    episim::GenerationInfo info;
    const episim::PeriodicSchedule schedule = episim::generate_synthetic(spec, gen_seed, &info);
    episim::save_schedule_json(schedule, gen_out);
    std::printf("{\n  \"max_weighted_in_degree\": %.17g,\n  \"h\": %.17g\n}\n",
                info.max_weighted_in_degree, info.h);
    return 0;
  }

  if (cmd_cycle->parsed()) {
    const episim::PeriodicSchedule schedule =
        episim::load_schedule_json(cyc_args.path, cyc_args.transpose);
    episim::validate_schedule(schedule, /*strict=*/true);
    const episim::SystemMatrices mats = episim::build_system_matrices(schedule);
    const episim::StateVector x0 = episim::parse_init_spec(cyc_init, schedule.n);
    long burn_in = cyc_burn_in;
    if (burn_in < 0) {
      const double rho = episim::monodromy(mats).radius();
      burn_in = std::min(episim::default_burn_in(schedule.p, rho),
                         std::max<long>(0, cyc_steps - 5L * schedule.p));
    }
    const episim::Trajectory traj = episim::simulate(mats, x0, cyc_steps);
    const episim::CycleReport report =
        episim::detect_limit_cycle(traj, schedule.p, burn_in, cyc_tol, cyc_max_multiple);
    std::cout << episim::cycle_report_to_json(report);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const episim::InfeasibleRequest& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const episim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
