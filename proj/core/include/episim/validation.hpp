#pragma once

#include <string>
#include <vector>

#include "episim/schedule.hpp"

namespace episim {

/// The model assumptions checked on a schedule.
///   A1  periodicity (structural, true by construction of PeriodicSchedule)
///   A2  h*delta_i(k) >= 0 and bbar_ij(k) >= 0
///   A3  h*delta_i(k) <= 1 and h*sum_j bbar_ij(k) <= 1
///   A4  for every phase there is i != j with bbar_ij(k) > 0
///   A5  every phase graph is strongly connected
/// A1-A3 gate simulation and the exponential-stability results; A4-A5 are
/// additionally required by the boundary (rho = 1) and instability claims.
enum class Assumption { A1, A2, A3, A4, A5 };

const char* to_string(Assumption a);

/// A single offending location, phase-level when node < 0.
struct Offender {
  int phase = -1;
  int node = -1;
  double value = 0.0;
};

struct AssumptionCheck {
  Assumption id = Assumption::A1;
  bool pass = true;
  std::vector<Offender> offenders;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;  // always A1..A5 in order

  const AssumptionCheck& check(Assumption a) const;
  bool passed(Assumption a) const { return check(a).pass; }

  /// A1-A3: what simulation and GES classification require.
  bool core_ok() const;
  /// A4 and A5 as well: what boundary/instability claims require.
  bool gas_ready() const;
};

/// Evaluates assumptions A1-A5 phase by phase. Structural violations
/// (negative weight, length mismatch, ...) throw InvalidInput regardless
/// of `strict`; with strict=true an A2/A3 failure throws as well instead
/// of being reported.
ValidationReport validate_schedule(const PeriodicSchedule& schedule, bool strict = false);

}  // namespace episim
