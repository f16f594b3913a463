#include "episim/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "episim/errors.hpp"

namespace episim {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::GES: return "GES";
    case Classification::GAS_BOUNDARY: return "GAS_BOUNDARY";
    case Classification::UNSTABLE: return "UNSTABLE";
    case Classification::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "?";
}

namespace {

// Largest eigenvalue of M(k)^T P(k+1) M(k) - P(k), maximized over k.
double certificate_defect(const std::vector<Eigen::VectorXd>& P, const SystemMatrices& mats) {
  double defect = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < mats.p; ++k) {
    const Eigen::VectorXd& pk = P[static_cast<size_t>(k)];
    const Eigen::VectorXd& pk1 = P[static_cast<size_t>((k + 1) % mats.p)];
    const Eigen::MatrixXd& m = mats.m[static_cast<size_t>(k)];
    Eigen::MatrixXd d = m.transpose() * pk1.asDiagonal() * m;
    d -= Eigen::MatrixXd(pk.asDiagonal());
    const Eigen::MatrixXd sym = 0.5 * (d + d.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    defect = std::max(defect, es.eigenvalues().maxCoeff());
  }
  return defect;
}

std::vector<Eigen::VectorXd> slice_blocks(const Eigen::VectorXd& q, int n, int p) {
  std::vector<Eigen::VectorXd> P;
  P.reserve(static_cast<size_t>(p));
  for (int k = 0; k < p; ++k) P.push_back(q.segment(k * n, n));
  return P;
}

LyapunovCertificate build_certificate(const SystemMatrices& mats, const CyclicLift& lift,
                                      LyapunovCertificate::Mode mode) {
  LyapunovCertificate cert;
  cert.mode = mode;

  if (mode == LyapunovCertificate::Mode::Strict) {
    // Q = diag(eta_i / xi_i) from sub-invariant vectors at mu in (rho, 1):
    // a weighted Cauchy-Schwarz argument gives Mt^T Q Mt <= mu^2 Q < Q.
    const double rho = lift.rho;
    if (!(rho < 1.0))
      throw InvalidInput("lyapunov_certificate: strict mode needs rho(lift) < 1");
    const double candidates[] = {0.5 * (1.0 + rho), 0.25 * (3.0 + rho)};
    std::string last_error;
    for (double mu : candidates) {
      try {
        const auto [xi, eta] = subinvariant_vectors(lift.mtilde, mu);
        Eigen::VectorXd q = eta.cwiseQuotient(xi);
        q /= q.maxCoeff();
        cert.P = slice_blocks(q, mats.n, mats.p);
        cert.mu = mu;
        cert.defect = certificate_defect(cert.P, mats);
        if (cert.defect < 0.0) return cert;
        last_error = "verified defect is not negative";
      } catch (const NumericalBreakdown& e) {
        last_error = e.what();
      }
    }
    throw NumericalBreakdown("lyapunov_certificate: strict construction failed (" + last_error +
                             ")");
  }

  // Semidefinite: Q = diag(u_i / v_i) from the Perron pair of the lift;
  // the same inequality with mu = 1 gives Mt^T Q Mt <= Q.
  const PerronPair pp = perron_vectors(lift.mtilde);  // throws if reducible
  Eigen::VectorXd q = pp.left.cwiseQuotient(pp.right);
  q /= q.maxCoeff();
  cert.P = slice_blocks(q, mats.n, mats.p);
  cert.mu = 1.0;
  cert.defect = certificate_defect(cert.P, mats);
  if (cert.defect > 1e-9)
    throw NumericalBreakdown("lyapunov_certificate: semidefinite defect exceeds tolerance");
  return cert;
}

}  // namespace

LyapunovCertificate lyapunov_certificate(const SystemMatrices& mats, const CyclicLift& lift,
                                         double boundary_tol) {
  if (lift.rho < 1.0 - boundary_tol)
    return build_certificate(mats, lift, LyapunovCertificate::Mode::Strict);
  if (lift.rho <= 1.0 + boundary_tol)
    return build_certificate(mats, lift, LyapunovCertificate::Mode::Semidefinite);
  throw InvalidInput("lyapunov_certificate: rho(lift) > 1, no certificate exists");
}

LyapunovCertificate lyapunov_certificate(const SystemMatrices& mats) {
  return lyapunov_certificate(mats, cyclic_lift(mats), 1e-9);
}

RateBound rate_bound(const LyapunovCertificate& cert, const SystemMatrices& mats) {
  if (cert.mode != LyapunovCertificate::Mode::Strict)
    throw InvalidInput("rate_bound: requires a strict certificate");
  if (static_cast<int>(cert.P.size()) != mats.p)
    throw InvalidInput("rate_bound: certificate and matrices disagree on the period");

  RateBound out;
  out.sigma1 = std::numeric_limits<double>::infinity();
  out.sigma2 = 0.0;
  out.sigma3 = -std::numeric_limits<double>::infinity();
  out.sigma3_conservative = std::numeric_limits<double>::infinity();

  for (int k = 0; k < mats.p; ++k) {
    const Eigen::VectorXd& pk = cert.P[static_cast<size_t>(k)];
    const Eigen::VectorXd& pk1 = cert.P[static_cast<size_t>((k + 1) % mats.p)];
    out.sigma1 = std::min(out.sigma1, pk.minCoeff());
    out.sigma2 = std::max(out.sigma2, pk.maxCoeff());

    const Eigen::MatrixXd& m = mats.m[static_cast<size_t>(k)];
    Eigen::MatrixXd w = -(m.transpose() * pk1.asDiagonal() * m);
    w += Eigen::MatrixXd(pk.asDiagonal());
    const Eigen::MatrixXd sym = 0.5 * (w + w.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    const double lambda_min = es.eigenvalues().minCoeff();
    out.sigma3 = std::max(out.sigma3, lambda_min);
    out.sigma3_conservative = std::min(out.sigma3_conservative, lambda_min);
  }

  if (out.sigma3_conservative <= 0.0)
    throw NumericalBreakdown("rate_bound: certificate is not strictly decreasing on every phase");

  // sigma2 >= sigma3 by Weyl's inequalities; the clamp only absorbs rounding.
  out.rate = std::sqrt(std::max(0.0, 1.0 - out.sigma3 / out.sigma2));
  out.rate_conservative = std::sqrt(std::max(0.0, 1.0 - out.sigma3_conservative / out.sigma2));
  return out;
}

double lyapunov_value(const LyapunovCertificate& cert, long k, const Eigen::VectorXd& x) {
  return x.dot(cert.at(k).cwiseProduct(x));
}

StabilityReport classify(const PeriodicSchedule& schedule, const SystemMatrices& mats,
                         const ClassifyOptions& options) {
  const ValidationReport val = validate_schedule(schedule, false);
  if (!val.core_ok())
    throw InvalidInput("classify: schedule violates A2/A3; fix or validate first");

  StabilityReport report;
  report.tol_eq = options.tol_eq;
  report.jsr_depth = options.jsr_depth;
  report.a4_ok = val.passed(Assumption::A4);
  report.a5_ok = val.passed(Assumption::A5);

  const MonodromySet mono = monodromy(mats);
  report.rho_monodromy = mono.radius();
  report.jsr = jsr_bounds(mats.m, options.jsr_depth);

  const double rho = report.rho_monodromy;
  const double tol = options.tol_eq;
  const bool irreducible_claims_ok = report.a4_ok && report.a5_ok;

  if (rho < 1.0 - tol)
    report.classification = Classification::GES;
  else if (rho <= 1.0 + tol)
    report.classification = irreducible_claims_ok ? Classification::GAS_BOUNDARY
                                                  : Classification::INCONCLUSIVE;
  else
    report.classification =
        irreducible_claims_ok ? Classification::UNSTABLE : Classification::INCONCLUSIVE;

  if (options.with_certificate && (report.classification == Classification::GES ||
                                   report.classification == Classification::GAS_BOUNDARY)) {
    try {
      const CyclicLift lift = cyclic_lift(mats);
      const auto mode = report.classification == Classification::GES
                            ? LyapunovCertificate::Mode::Strict
                            : LyapunovCertificate::Mode::Semidefinite;
      report.certificate = build_certificate(mats, lift, mode);
      if (report.certificate->mode == LyapunovCertificate::Mode::Strict)
        report.rate = rate_bound(*report.certificate, mats);
    } catch (const Error& e) {
      report.certificate.reset();
      report.rate.reset();
      report.certificate_note = e.what();
    }
  }
  return report;
}

}  // namespace episim
