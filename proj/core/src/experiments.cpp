#include "episim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "episim/control.hpp"
#include "episim/errors.hpp"
#include "episim/spectral.hpp"
#include "episim/system_matrices.hpp"

namespace episim {

namespace {

// Uniform double in [0,1) from the raw engine output; the standard
// distributions are implementation-defined, this mapping is not.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

PeriodicSchedule generate_synthetic(const SyntheticNetSpec& spec, std::uint64_t seed,
                                    GenerationInfo* info) {
  if (spec.n < 2) throw InvalidInput("generate_synthetic: n must be >= 2");
  if (spec.p < 1) throw InvalidInput("generate_synthetic: p must be >= 1");
  if (spec.ring_width < 0 || 2 * spec.ring_width >= spec.n)
    throw InvalidInput("generate_synthetic: ring width must satisfy 0 <= 2w < n");
  if (spec.overlay.edge_prob < 0.0 || spec.overlay.edge_prob > 1.0)
    throw InvalidInput("generate_synthetic: edge_prob must be in [0,1]");
  if (spec.overlay.weight_min <= 0.0 || spec.overlay.weight_max < spec.overlay.weight_min)
    throw InvalidInput("generate_synthetic: need 0 < weight_min <= weight_max");
  if (spec.beta < 0.0 || spec.delta < 0.0)
    throw InvalidInput("generate_synthetic: rates must be nonnegative");
  if (!spec.h_auto && !(spec.h > 0.0))
    throw InvalidInput("generate_synthetic: explicit h must be positive");

  std::mt19937_64 rng(seed);
  const int n = spec.n;

  PeriodicSchedule schedule;
  schedule.n = n;
  schedule.p = spec.p;
  schedule.phases.resize(static_cast<size_t>(spec.p));

  bool any_offdiag = false;
  for (int k = 0; k < spec.p; ++k) {
    // Dense accumulation so ring and overlay weights merge on collision.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int d = 1; d <= spec.ring_width; ++d) {
        a(i, (i + d) % n) += 1.0;
        a(i, (i - d + n) % n) += 1.0;
      }
    }
    if (spec.overlay.edge_prob > 0.0) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const double coin = uniform01(rng);
          const double w =
              spec.overlay.weight_min +
              uniform01(rng) * (spec.overlay.weight_max - spec.overlay.weight_min);
          if (coin < spec.overlay.edge_prob) a(i, j) += w;
        }
      }
    }

    GraphPhase& phase = schedule.phases[static_cast<size_t>(k)];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (a(i, j) > 0.0) {
          phase.adjacency.push_back({i, j, a(i, j)});
          if (i != j) any_offdiag = true;
        }
    phase.beta.assign(static_cast<size_t>(n), spec.beta);
    phase.delta.assign(static_cast<size_t>(n), spec.delta);
  }

  if (!any_offdiag || spec.beta == 0.0)
    throw InvalidInput(
        "generate_synthetic: no transmission edge in any phase; increase edge_prob or "
        "ring width");

  // Pick h against Assumption 3 before it can be violated.
  schedule.h = 1.0;  // placeholder so the structural check passes
  const double max_row = max_scaled_in_degree(schedule);
  const double denom = std::max(spec.delta, max_row);
  schedule.h = spec.h_auto ? (denom > 0.0 ? 1.0 / denom : 1.0) : spec.h;

  if (info) {
    info->max_weighted_in_degree = max_row;
    info->h = schedule.h;
  }
  validate_schedule(schedule, /*strict=*/true);
  return schedule;
}

StateVector parse_init_spec(const std::string& spec, int n) {
  if (spec == "zero") return StateVector::Zero(n);
  if (spec.rfind("node:", 0) == 0) {
    const int i = std::stoi(spec.substr(5));
    if (i < 0 || i >= n) throw InvalidInput("init spec: node index out of range");
    StateVector x = StateVector::Zero(n);
    x(i) = 1.0;
    return x;
  }
  if (spec.rfind("uniform:", 0) == 0) {
    const double c = std::stod(spec.substr(8));
    if (c < 0.0 || c > 1.0) throw InvalidInput("init spec: uniform level must be in [0,1]");
    return StateVector::Constant(n, c);
  }
  if (spec.rfind("file:", 0) == 0) {
    std::ifstream in(spec.substr(5));
    if (!in) throw InvalidInput("init spec: cannot open " + spec.substr(5));
    std::vector<double> values;
    std::string token;
    while (std::getline(in, token, ',')) {
      std::istringstream line(token);
      double v;
      while (line >> v) values.push_back(v);
    }
    if (static_cast<int>(values.size()) != n)
      throw InvalidInput("init spec: file holds " + std::to_string(values.size()) +
                         " values, expected " + std::to_string(n));
    StateVector x(n);
    for (int i = 0; i < n; ++i) x(i) = values[static_cast<size_t>(i)];
    return sanitize_state(x);
  }
  throw InvalidInput("init spec: expected zero | node:<i> | uniform:<c> | file:<path>");
}

ConvergenceStats detect_convergence(const Trajectory& traj, int p, double tol) {
  if (p < 1) throw InvalidInput("detect_convergence: p must be >= 1");
  const long T = traj.steps();
  if (T < 2 * p) throw InvalidInput("detect_convergence: trajectory shorter than 2 periods");

  ConvergenceStats out;
  out.converged = traj.back().lpNorm<Eigen::Infinity>() < tol;
  for (long k = 0; k <= T; ++k) {
    if (traj.states[static_cast<size_t>(k)].lpNorm<Eigen::Infinity>() < tol) {
      out.hitting_step = k;
      break;
    }
  }

  // Geometric mean of whole-period decay ratios over the last half; the
  // per-step M(k) may individually expand even when the period contracts,
  // so the measurement window is periods, reported per step.
  const long periods = T / p;
  double log_sum = 0.0;
  long count = 0;
  bool hit_zero = false;
  for (long q = periods / 2; q + 1 <= periods; ++q) {
    const double from = traj.states[static_cast<size_t>(q * p)].norm();
    const double to = traj.states[static_cast<size_t>((q + 1) * p)].norm();
    if (from == 0.0) {
      hit_zero = true;
      continue;
    }
    if (to == 0.0) {
      hit_zero = true;
      continue;
    }
    log_sum += std::log(to / from);
    ++count;
  }
  if (count == 0)
    out.empirical_rate = hit_zero ? 0.0 : 1.0;
  else
    out.empirical_rate = std::exp(log_sum / (static_cast<double>(count) * p));
  return out;
}

long default_burn_in(int p, double rho_hat) {
  constexpr long kCap = 100000;
  if (!(rho_hat < 1.0)) return kCap;
  const double raw = 10.0 * p / (1.0 - rho_hat);
  if (raw >= static_cast<double>(kCap)) return kCap;
  return std::max<long>(static_cast<long>(std::ceil(raw)), 1);
}

CycleReport detect_limit_cycle(const Trajectory& traj, int p, long burn_in, double cycle_tol,
                               int max_multiple) {
  if (p < 1) throw InvalidInput("detect_limit_cycle: p must be >= 1");
  if (burn_in < 0) throw InvalidInput("detect_limit_cycle: burn_in must be >= 0");
  const long T = traj.steps();
  if (T < burn_in + 4L * p)
    throw InvalidInput("detect_limit_cycle: trajectory must run at least burn_in + 4p steps");

  CycleReport out;
  out.burn_in = burn_in;
  for (int mult = 1; mult <= max_multiple; ++mult) {
    const long d = static_cast<long>(mult) * p;
    const long kmax = T - d;
    if (kmax < burn_in + d) break;  // need the candidate cycle seen twice

    double dev = 0.0;
    for (long k = burn_in; k <= kmax; ++k) {
      dev = std::max(dev, (traj.states[static_cast<size_t>(k + d)] -
                           traj.states[static_cast<size_t>(k)])
                              .lpNorm<Eigen::Infinity>());
      if (dev > cycle_tol) break;
    }
    if (dev <= cycle_tol) {
      out.detected = true;
      out.period = static_cast<int>(d);
      out.max_deviation = dev;
      // Representatives aligned to absolute time (k0 divisible by d), so
      // detections from different initial conditions can be compared
      // state by state.
      const long k0 = ((T - d) / d) * d;
      out.states.reserve(static_cast<size_t>(d));
      double flat = 0.0;
      for (long r = 0; r < d; ++r) {
        out.states.push_back(traj.states[static_cast<size_t>(k0 + r)]);
        flat = std::max(flat,
                        (out.states.back() - out.states.front()).lpNorm<Eigen::Infinity>());
      }
      out.fixed_point = flat <= cycle_tol;
      return out;
    }
  }
  return out;
}

const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::DeltaScalar: return "delta";
    case SweepParameter::GammaScalar: return "gamma";
    case SweepParameter::StepSize: return "h";
  }
  return "?";
}

SweepReport sweep(const PeriodicSchedule& schedule, SweepParameter parameter,
                  const std::vector<double>& values, const SweepConfig& config) {
  check_structure(schedule);
  SweepReport report;
  report.parameter = parameter;

  for (double value : values) {
    SweepRow row;
    row.value = value;
    try {
      PeriodicSchedule inst = schedule;
      Classification cls = Classification::INCONCLUSIVE;
      double rho = 0.0;
      if (parameter == SweepParameter::GammaScalar) {
        const SynthesisResult controlled =
            synthesize(schedule, value, {}, {}, config.classify_options);
        if (!controlled.plan.feasible)
          throw InvalidInput("gamma value violates Assumption 3");
        inst = controlled.schedule;
        cls = controlled.plan.classification;
        rho = controlled.plan.rho_monodromy;
      } else {
        if (parameter == SweepParameter::DeltaScalar) {
          for (GraphPhase& phase : inst.phases)
            phase.delta.assign(static_cast<size_t>(inst.n), value);
        } else {
          inst.h = value;
        }
        validate_schedule(inst, /*strict=*/true);
        const SystemMatrices mats = build_system_matrices(inst);
        const StabilityReport rep = classify(inst, mats, config.classify_options);
        cls = rep.classification;
        rho = rep.rho_monodromy;
      }

      row.rho = rho;
      row.classification = cls;

      const StateVector x0 =
          config.x0.size() > 0 ? config.x0 : StateVector::Constant(inst.n, 0.5);
      const Trajectory traj = simulate(inst, x0, config.steps);
      const ConvergenceStats stats = detect_convergence(traj, inst.p, config.convergence_tol);
      row.converged = stats.converged;
      row.hitting_step = stats.hitting_step;
      row.empirical_rate = stats.empirical_rate;
      row.xbar = traj.xbar;
      row.valid = true;
    } catch (const InvalidInput&) {
      row.valid = false;  // row marked invalid, sweep continues
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace episim
