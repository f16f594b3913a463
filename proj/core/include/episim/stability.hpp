#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "episim/schedule.hpp"
#include "episim/spectral.hpp"
#include "episim/system_matrices.hpp"
#include "episim/validation.hpp"

namespace episim {

enum class Classification { GES, GAS_BOUNDARY, UNSTABLE, INCONCLUSIVE };

const char* to_string(Classification c);

/// Periodic diagonal Lyapunov certificate: positive diagonals P(0..p-1)
/// (P(p) wraps to P(0)) with
///   M(k)^T P(k+1) M(k) - P(k)  negative definite   (strict mode)
///                              negative semidefinite (semidefinite mode).
/// `defect` is the max over k of the largest eigenvalue of that difference,
/// so strict certificates have defect < 0 and semidefinite ones
/// defect <= 1e-9.
struct LyapunovCertificate {
  enum class Mode { Strict, Semidefinite };

  std::vector<Eigen::VectorXd> P;  ///< diagonals, one per phase
  Mode mode = Mode::Strict;
  double defect = 0.0;
  double mu = 0.0;  ///< contraction level used by the strict construction

  const Eigen::VectorXd& at(long k) const {
    const long p = static_cast<long>(P.size());
    return P[static_cast<size_t>(((k % p) + p) % p)];
  }
};

/// Scalars of the exponential-decay bound extracted from a strict
/// certificate:
///   sigma1 = min_k lambda_min P(k)
///   sigma2 = max_k lambda_max P(k)
///   sigma3 = max_k lambda_min(P(k) - M(k)^T P(k+1) M(k))
/// sigma3_conservative replaces that max over k by a min, which is the
/// per-step uniformly valid choice; the guaranteed envelope is
///   ||x(k)|| <= sqrt(sigma2/sigma1) ||x(0)|| rate_conservative^k.
struct RateBound {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double sigma3 = 0.0;
  double sigma3_conservative = 0.0;
  double rate = 0.0;               ///< sqrt(1 - sigma3/sigma2)
  double rate_conservative = 0.0;  ///< sqrt(1 - sigma3_conservative/sigma2)
};

struct ClassifyOptions {
  double tol_eq = 1e-9;         ///< relative half-width of the rho = 1 band
  int jsr_depth = 4;
  bool with_certificate = true; ///< construct Lyapunov certificate + rate bound
};

struct StabilityReport {
  double rho_monodromy = 0.0;
  JsrBounds jsr;
  Classification classification = Classification::INCONCLUSIVE;
  bool a4_ok = false;
  bool a5_ok = false;
  std::optional<LyapunovCertificate> certificate;
  std::optional<RateBound> rate;
  std::string certificate_note;  ///< set when construction was skipped/failed
  double tol_eq = 0.0;
  int jsr_depth = 0;
};

/// Classifies the disease-free equilibrium from the monodromy radius rho*:
///   rho* < 1 - tol              -> GES
///   |rho* - 1| <= tol, A4 & A5  -> GAS_BOUNDARY
///   rho* > 1 + tol, A4 & A5     -> UNSTABLE
///   otherwise                   -> INCONCLUSIVE
/// (tol relative). JSR bounds over {M(k)} are reported alongside as the
/// stricter sufficient condition. When requested and applicable, a
/// diagonal Lyapunov certificate and its rate bound are attached.
StabilityReport classify(const PeriodicSchedule& schedule, const SystemMatrices& mats,
                         const ClassifyOptions& options = {});

/// Constructs the periodic diagonal certificate on the cyclic lift and
/// slices it into per-phase blocks. Strict construction (rho(lift) < 1):
/// xi/eta sub-invariant vectors at mu in (rho, 1), Q = diag(eta_i/xi_i).
/// Semidefinite construction (rho(lift) = 1, lift irreducible): Perron
/// vectors, Q = diag(u_i/v_i). The certificate is verified numerically
/// before it is returned; failure after retries throws NumericalBreakdown.
LyapunovCertificate lyapunov_certificate(const SystemMatrices& mats);

/// As above but with the lift precomputed (classify() uses this overload).
LyapunovCertificate lyapunov_certificate(const SystemMatrices& mats, const CyclicLift& lift,
                                         double boundary_tol = 1e-9);

/// Rate scalars for a strict certificate. Throws NumericalBreakdown if the
/// per-step defect is not positive definite (sigma3_conservative <= 0).
RateBound rate_bound(const LyapunovCertificate& cert, const SystemMatrices& mats);

/// Lyapunov value V(k, x) = x^T P(k mod p) x.
double lyapunov_value(const LyapunovCertificate& cert, long k, const Eigen::VectorXd& x);

}  // namespace episim
