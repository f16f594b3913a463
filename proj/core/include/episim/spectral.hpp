#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "episim/system_matrices.hpp"

namespace episim {

/// Spectral radius of an entrywise nonnegative matrix.
///
/// Power iteration on M + eps*I with eps = 1e-3 * max(1, max entry); the
/// shift makes the Perron root strictly dominant even when the support
/// graph is periodic (e.g. a 2-cycle), and for nonnegative M it moves the
/// radius by exactly eps. Convergence: successive Rayleigh estimates agree
/// to relative `tol` and the eigen-residual is small. Falls back to a dense
/// eigensolve if the iteration has not settled after `max_iters`; throws
/// NumericalBreakdown only if that is impossible (very large n).
double spectral_radius(const Eigen::MatrixXd& m, double tol = 1e-12, int max_iters = 100000);

/// True iff the directed graph on the positive entries of `adjacency`
/// (a_ij > 0 meaning an edge j -> i) has a single strongly connected
/// component spanning all nodes. A 1x1 graph counts as strongly connected.
bool strongly_connected(const Eigen::MatrixXd& adjacency);
bool strongly_connected(int n, const std::vector<AdjacencyEntry>& edges);

/// All p cyclic monodromy products and their spectral radii.
/// products[k] = M(k+p-1) * ... * M(k) with phase indices mod p.
struct MonodromySet {
  std::vector<Eigen::MatrixXd> products;
  std::vector<double> rho;

  double radius() const { return rho.empty() ? 0.0 : rho.front(); }
};

/// Tolerance on the relative spread of rho across the p cyclic rotations;
/// the rotations share their spectrum exactly, so a larger spread means
/// numerical breakdown.
inline constexpr double kMonodromySpreadTol = 1e-9;

MonodromySet monodromy(const SystemMatrices& mats);

/// The pn x pn cyclic reformulation: M(p-1) in the top-right block and
/// M(0), ..., M(p-2) on the sub-diagonal blocks. Its p-th power is block
/// diagonal with the p monodromy products, and its spectral radius is
/// rho(monodromy)^(1/p).
struct CyclicLift {
  Eigen::MatrixXd mtilde;
  Eigen::MatrixXd mtilde_p;  ///< mtilde^p by repeated multiplication
  double rho = 0.0;          ///< spectral radius of mtilde
};

CyclicLift cyclic_lift(const SystemMatrices& mats);

/// Certified enclosure of the joint spectral radius of a finite matrix set,
/// from exhaustive enumeration of products up to a given length:
///   lower = max over products P of length d <= depth of rho(P)^(1/d)
///   upper = min over d of (max over length-d products of ||P||_inf)^(1/d)
struct JsrBounds {
  double lower = 0.0;
  double upper = 0.0;
  int depth = 0;              ///< deepest fully enumerated length
  std::vector<int> witness;   ///< factor indices of the lower-bound product,
                              ///< applied right to left (witness[0] acts first)
  bool truncated = false;     ///< stopped early on the product budget
  std::vector<double> per_length_lower;  ///< max rho(P)^(1/d) per length d,
                                         ///< entry d-1; [p-1] is the
                                         ///< fixed-length-p growth value
};

/// Enumeration stops (with truncated=true) once a length would exceed
/// `budget` products in total.
JsrBounds jsr_bounds(const std::vector<Eigen::MatrixXd>& mats, int depth,
                     long budget = 1000000);

/// Strictly positive xi, eta with M xi <= mu xi and M^T eta <= mu eta
/// entrywise (componentwise strict), computed as (mu I - M)^{-1} 1 and
/// (mu I - M^T)^{-1} 1. Requires rho(M) < mu; throws NumericalBreakdown on
/// a near-singular solve, in which case the caller retries with larger mu.
std::pair<Eigen::VectorXd, Eigen::VectorXd> subinvariant_vectors(const Eigen::MatrixXd& m,
                                                                 double mu);

struct PerronPair {
  Eigen::VectorXd right;  ///< v, max-entry normalized to 1
  Eigen::VectorXd left;   ///< u, max-entry normalized to 1
  double rho = 0.0;
};

/// Right and left Perron vectors of an irreducible nonnegative matrix via
/// shifted power iteration (the shift leaves the eigenvectors unchanged).
/// Residuals ||M v - rho v||_inf and ||M^T u - rho u||_inf are driven
/// below 1e-9. Throws InvalidInput if the support graph is reducible.
PerronPair perron_vectors(const Eigen::MatrixXd& m);

}  // namespace episim
