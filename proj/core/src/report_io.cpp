#include "episim/report_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "episim/errors.hpp"

namespace episim {

namespace {

using nlohmann::json;

constexpr const char* kSpecVersion = "1";

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
  if (!out) throw InvalidInput("write failed for " + path);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

PeriodicSchedule parse_schedule_json(const std::string& text, bool transpose) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("schedule JSON: ") + e.what());
  }

  PeriodicSchedule s;
  try {
    s.n = j.at("n").get<int>();
    s.p = j.at("p").get<int>();
    s.h = j.at("h").get<double>();
    for (const json& jp : j.at("phases")) {
      GraphPhase phase;
      for (const json& triple : jp.at("adjacency")) {
        if (!triple.is_array() || triple.size() != 3)
          throw InvalidInput("schedule JSON: adjacency entries must be [i, j, w] triples");
        AdjacencyEntry e{triple[0].get<int>(), triple[1].get<int>(), triple[2].get<double>()};
        if (transpose) std::swap(e.i, e.j);
        phase.adjacency.push_back(e);
      }
      phase.beta = jp.at("beta").get<std::vector<double>>();
      phase.delta = jp.at("delta").get<std::vector<double>>();
      s.phases.push_back(std::move(phase));
    }
    if (j.contains("labels")) s.labels = j["labels"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("schedule JSON: ") + e.what());
  }
  check_structure(s);
  return s;
}

PeriodicSchedule load_schedule_json(const std::string& path, bool transpose) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_schedule_json(buf.str(), transpose);
}

std::string schedule_to_json(const PeriodicSchedule& schedule) {
  json j;
  j["n"] = schedule.n;
  j["p"] = schedule.p;
  j["h"] = schedule.h;
  j["phases"] = json::array();
  for (const GraphPhase& phase : schedule.phases) {
    json jp;
    json adj = json::array();
    for (const AdjacencyEntry& e : phase.adjacency)
      adj.push_back(json::array({e.i, e.j, e.weight}));
    jp["adjacency"] = std::move(adj);
    jp["beta"] = phase.beta;
    jp["delta"] = phase.delta;
    j["phases"].push_back(std::move(jp));
  }
  if (schedule.has_labels()) j["labels"] = schedule.labels;
  return j.dump(2) + "\n";
}

void save_schedule_json(const PeriodicSchedule& schedule, const std::string& path) {
  write_text_file(path, schedule_to_json(schedule));
}

SyntheticNetSpec load_synthetic_spec_json(const std::string& path) {
  const json j = load_json_file(path);
  SyntheticNetSpec spec;
  try {
    spec.n = j.at("n").get<int>();
    spec.p = j.at("p").get<int>();
    spec.ring_width = j.value("ring_width", 1);
    if (j.contains("overlay")) {
      const json& o = j["overlay"];
      spec.overlay.edge_prob = o.value("edge_prob", 0.0);
      spec.overlay.weight_min = o.value("weight_min", 1.0);
      spec.overlay.weight_max = o.value("weight_max", 1.0);
    }
    spec.beta = j.value("beta", 1.0);
    spec.delta = j.value("delta", 1.0);
    if (j.contains("h") && !j["h"].is_string()) {
      spec.h = j["h"].get<double>();
      spec.h_auto = false;
    } else {
      spec.h_auto = true;  // "h": "auto" or absent
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("generator spec JSON: ") + e.what());
  }
  return spec;
}

std::string validation_report_to_json(const ValidationReport& report) {
  json j;
  j["spec_version"] = kSpecVersion;
  json checks = json::object();
  for (const AssumptionCheck& c : report.checks) {
    json entry;
    entry["pass"] = c.pass;
    json offenders = json::array();
    for (const Offender& o : c.offenders) {
      json oj;
      oj["phase"] = o.phase;
      if (o.node >= 0) {
        oj["node"] = o.node;
        oj["value"] = o.value;
      }
      offenders.push_back(std::move(oj));
    }
    entry["offenders"] = std::move(offenders);
    checks[to_string(c.id)] = std::move(entry);
  }
  j["assumptions"] = std::move(checks);
  j["core_ok"] = report.core_ok();
  j["gas_ready"] = report.gas_ready();
  return j.dump(2) + "\n";
}

std::string stability_report_to_json(const StabilityReport& report) {
  json j;
  j["spec_version"] = kSpecVersion;
  j["rho_monodromy"] = report.rho_monodromy;
  j["jsr_lower"] = report.jsr.lower;
  j["jsr_upper"] = report.jsr.upper;
  j["jsr_witness"] = report.jsr.witness;
  j["jsr_truncated"] = report.jsr.truncated;
  j["jsr_per_length_lower"] = report.jsr.per_length_lower;
  j["classification"] = to_string(report.classification);
  j["assumptions"] = {{"A4", report.a4_ok}, {"A5", report.a5_ok}};
  j["tolerances"] = {{"tol_eq", report.tol_eq}, {"jsr_depth", report.jsr_depth}};
  if (report.certificate) {
    json cert;
    cert["mode"] = report.certificate->mode == LyapunovCertificate::Mode::Strict
                       ? "strict"
                       : "semidefinite";
    cert["defect"] = report.certificate->defect;
    cert["mu"] = report.certificate->mu;
    json diag = json::array();
    for (const Eigen::VectorXd& p : report.certificate->P) diag.push_back(vector_to_json(p));
    cert["P"] = std::move(diag);
    j["certificate"] = std::move(cert);
  } else {
    j["certificate"] = nullptr;
    if (!report.certificate_note.empty()) j["certificate_note"] = report.certificate_note;
  }
  if (report.rate) {
    j["rate_bound"] = report.rate->rate_conservative;
    j["sigma"] = {{"sigma1", report.rate->sigma1},
                  {"sigma2", report.rate->sigma2},
                  {"sigma3", report.rate->sigma3},
                  {"sigma3_conservative", report.rate->sigma3_conservative}};
    j["rate_paper_form"] = report.rate->rate;
  } else {
    j["rate_bound"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string control_plan_to_json(const ControlPlan& plan) {
  json j;
  j["spec_version"] = kSpecVersion;
  j["gamma"] = vector_to_json(plan.gamma);
  j["controlled_phases"] = plan.controlled_phases;
  j["fallback_delta"] =
      plan.fallback_delta.size() > 0 ? vector_to_json(plan.fallback_delta) : json::array();
  json deltas = json::array();
  for (const Eigen::VectorXd& d : plan.synthesized_delta) deltas.push_back(vector_to_json(d));
  j["synthesized_delta"] = std::move(deltas);
  j["feasible"] = plan.feasible;
  j["rho_monodromy"] = std::isfinite(plan.rho_monodromy) ? json(plan.rho_monodromy) : json();
  j["classification"] = to_string(plan.classification);
  return j.dump(2) + "\n";
}

std::string minimal_gamma_to_json(const MinimalGammaResult& result) {
  json j;
  j["spec_version"] = kSpecVersion;
  j["gamma_star"] = result.gamma_star;
  j["rho"] = result.rho;
  j["feasible"] = result.feasible;
  j["evaluations"] = result.evaluations;
  return j.dump(2) + "\n";
}

std::string cycle_report_to_json(const CycleReport& report) {
  json j;
  j["spec_version"] = kSpecVersion;
  j["detected"] = report.detected;
  j["period"] = report.period;
  j["burn_in"] = report.burn_in;
  j["max_deviation"] = report.max_deviation;
  j["fixed_point"] = report.fixed_point;
  json states = json::array();
  for (const StateVector& s : report.states) states.push_back(vector_to_json(s));
  j["states"] = std::move(states);
  return j.dump(2) + "\n";
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ostringstream out;
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  out << "k";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x_" << i;
  out << ",xbar\n";
  for (size_t k = 0; k < traj.states.size(); ++k) {
    out << k;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << fmt_double(traj.states[k](i));
    out << ',' << fmt_double(traj.xbar[k]) << '\n';
  }
  write_text_file(path, out.str());
}

void write_color_csv(const Trajectory& traj, const std::string& path, double r, double b,
                     long sample_every) {
  if (sample_every < 1) throw InvalidInput("write_color_csv: sample_every must be >= 1");
  std::ostringstream out;
  out << "k,node,channel\n";
  for (size_t k = 0; k < traj.states.size(); k += static_cast<size_t>(sample_every)) {
    const StateVector& x = traj.states[k];
    for (Eigen::Index i = 0; i < x.size(); ++i)
      out << k << ',' << i << ',' << fmt_double(x(i) * r + (1.0 - x(i)) * b) << '\n';
  }
  write_text_file(path, out.str());
}

namespace {

void append_sweep_row(std::ostringstream& out, const SweepRow& row) {
  out << fmt_double(row.value) << ',';
  if (row.valid) {
    out << fmt_double(row.rho) << ',' << to_string(row.classification) << ','
        << (row.converged ? 1 : 0) << ',' << row.hitting_step << ','
        << fmt_double(row.empirical_rate);
  } else {
    out << ",invalid,,,";
  }
  out << '\n';
}

}  // namespace

void write_sweep_csv(const SweepReport& report, const std::string& path) {
  std::ostringstream out;
  out << "param_value,rho,classification,converged,hitting_step,empirical_rate\n";
  for (const SweepRow& row : report.rows) append_sweep_row(out, row);
  write_text_file(path, out.str());
}

void write_sweep_xbar_csv(const SweepReport& report, const std::string& path) {
  std::ostringstream out;
  out << "param_value,k,xbar\n";
  for (const SweepRow& row : report.rows) {
    if (!row.valid) continue;
    for (size_t k = 0; k < row.xbar.size(); ++k)
      out << fmt_double(row.value) << ',' << k << ',' << fmt_double(row.xbar[k]) << '\n';
  }
  write_text_file(path, out.str());
}

void write_text_file_checked(const std::string& path, const std::string& text) {
  write_text_file(path, text);
}

std::string sweep_report_to_json(const SweepReport& report) {
  json j;
  j["spec_version"] = kSpecVersion;
  j["parameter"] = to_string(report.parameter);
  json rows = json::array();
  for (const SweepRow& row : report.rows) {
    json r;
    r["param_value"] = row.value;
    r["valid"] = row.valid;
    if (row.valid) {
      r["rho"] = row.rho;
      r["classification"] = to_string(row.classification);
      r["converged"] = row.converged;
      r["hitting_step"] = row.hitting_step;
      r["empirical_rate"] = row.empirical_rate;
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace episim
