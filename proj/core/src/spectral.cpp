#include "episim/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "episim/errors.hpp"

namespace episim {

namespace {

void require_nonnegative_square(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw InvalidInput(std::string(who) + ": matrix must be square and nonempty");
  if (!m.allFinite()) throw InvalidInput(std::string(who) + ": matrix has non-finite entries");
  if ((m.array() < 0.0).any())
    throw InvalidInput(std::string(who) + ": matrix must be entrywise nonnegative");
}

// Induced infinity norm (max absolute row sum); submultiplicative, which
// the Gelfand-style JSR upper bound requires.
double induced_inf_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double dense_spectral_radius(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericalBreakdown("dense eigensolver failed to converge");
  return es.eigenvalues().array().abs().maxCoeff();
}

// Strongly connected components of the positive-support graph (Kosaraju),
// returned as a component id per node.
std::vector<int> scc_components(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<std::vector<int>> fwd(static_cast<size_t>(n)), rev(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && m(i, j) > 0.0) {
        fwd[static_cast<size_t>(j)].push_back(i);  // edge j -> i
        rev[static_cast<size_t>(i)].push_back(j);
      }

  std::vector<int> order;
  order.reserve(static_cast<size_t>(n));
  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (int start = 0; start < n; ++start) {
    if (seen[static_cast<size_t>(start)]) continue;
    // iterative DFS with an explicit edge cursor to record finish times
    std::vector<std::pair<int, size_t>> stack{{start, 0}};
    seen[static_cast<size_t>(start)] = 1;
    while (!stack.empty()) {
      auto& [v, cursor] = stack.back();
      if (cursor < fwd[static_cast<size_t>(v)].size()) {
        const int w = fwd[static_cast<size_t>(v)][cursor++];
        if (!seen[static_cast<size_t>(w)]) {
          seen[static_cast<size_t>(w)] = 1;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }

  std::vector<int> comp(static_cast<size_t>(n), -1);
  int ncomp = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[static_cast<size_t>(*it)] >= 0) continue;
    std::vector<int> stack{*it};
    comp[static_cast<size_t>(*it)] = ncomp;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : rev[static_cast<size_t>(v)])
        if (comp[static_cast<size_t>(w)] < 0) {
          comp[static_cast<size_t>(w)] = ncomp;
          stack.push_back(w);
        }
    }
    ++ncomp;
  }
  return comp;
}

struct PowerResult {
  double lambda = 0.0;      // dominant eigenvalue of the shifted matrix
  Eigen::VectorXd vec;
  bool converged = false;
};

// Power iteration on m + shift*I from the uniform positive vector.
// Converged when the Rayleigh estimate is stable over three consecutive
// iterations and the eigen-residual is below resid_tol * max(lambda, shift).
PowerResult shifted_power_iteration(const Eigen::MatrixXd& m, double shift, double tol,
                                    double resid_tol, int max_iters) {
  const Eigen::Index n = m.rows();
  PowerResult out;
  out.vec = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));

  double lambda_prev = std::numeric_limits<double>::quiet_NaN();
  int settled = 0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd w = m * out.vec + shift * out.vec;
    const double estimate = out.vec.dot(w) / out.vec.squaredNorm();
    const double scale = std::max(std::abs(estimate), shift);
    const double resid = (w - estimate * out.vec).lpNorm<Eigen::Infinity>();

    if (std::abs(estimate - lambda_prev) <= tol * scale)
      ++settled;
    else
      settled = 0;
    lambda_prev = estimate;
    out.lambda = estimate;

    const double wnorm = w.norm();
    if (wnorm == 0.0) {  // only possible with shift == 0 on a nilpotent direction
      out.lambda = 0.0;
      out.converged = true;
      return out;
    }
    out.vec = w / wnorm;

    if (settled >= 3 && resid <= resid_tol * scale) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace

namespace {

// Perron root of one matrix block by shifted power iteration, dense rescue
// on non-convergence. On an irreducible block the Perron root is simple,
// so both routes are well-conditioned there.
double block_spectral_radius(const Eigen::MatrixXd& m, double tol, int max_iters) {
  // The shift moves every eigenvalue by eps, so rho(m + eps I) = rho(m) + eps
  // for nonnegative m, and it breaks the modulus ties of imprimitive
  // support graphs (e.g. pure cycles) that stall plain power iteration.
  const double eps = 1e-3 * std::max(1.0, m.maxCoeff());
  const PowerResult r = shifted_power_iteration(m, eps, tol, 1e-11, max_iters);
  if (r.converged) return std::max(0.0, r.lambda - eps);

  if (m.rows() <= 512) return dense_spectral_radius(m);
  throw NumericalBreakdown(
      "spectral_radius: power iteration did not converge and matrix is too large for the "
      "dense fallback");
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& m, double tol, int max_iters) {
  require_nonnegative_square(m, "spectral_radius");
  const int n = static_cast<int>(m.rows());
  if (n == 1) return m(0, 0);
  if ((m.array() > 0.0).all()) return block_spectral_radius(m, tol, max_iters);

  // Frobenius normal form: the spectrum is the union over the strongly
  // connected components, so the radius is the max of the per-component
  // Perron roots. Trivial components contribute their diagonal entry
  // exactly, which keeps DAG-supported (nilpotent) matrices at exactly 0.
  const std::vector<int> comp = scc_components(m);
  const int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
  if (ncomp == 1) return block_spectral_radius(m, tol, max_iters);

  std::vector<std::vector<int>> members(static_cast<size_t>(ncomp));
  for (int i = 0; i < n; ++i) members[static_cast<size_t>(comp[static_cast<size_t>(i)])].push_back(i);

  double radius = 0.0;
  for (const std::vector<int>& idx : members) {
    if (idx.size() == 1) {
      radius = std::max(radius, m(idx[0], idx[0]));
      continue;
    }
    Eigen::MatrixXd block(idx.size(), idx.size());
    for (size_t r = 0; r < idx.size(); ++r)
      for (size_t c = 0; c < idx.size(); ++c)
        block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            m(idx[r], idx[c]);
    radius = std::max(radius, block_spectral_radius(block, tol, max_iters));
  }
  return radius;
}

bool strongly_connected(int n, const std::vector<AdjacencyEntry>& edges) {
  if (n <= 0) return false;
  if (n == 1) return true;

  std::vector<std::vector<int>> fwd(static_cast<size_t>(n)), rev(static_cast<size_t>(n));
  for (const AdjacencyEntry& e : edges) {
    if (e.weight <= 0.0 || e.i == e.j) continue;
    fwd[static_cast<size_t>(e.j)].push_back(e.i);  // edge j -> i
    rev[static_cast<size_t>(e.i)].push_back(e.j);
  }

  auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[static_cast<size_t>(v)]) {
        if (!seen[static_cast<size_t>(w)]) {
          seen[static_cast<size_t>(w)] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };

  return reaches_all(fwd) && reaches_all(rev);
}

bool strongly_connected(const Eigen::MatrixXd& adjacency) {
  if (adjacency.rows() != adjacency.cols() || adjacency.rows() == 0) return false;
  std::vector<AdjacencyEntry> edges;
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i)
    for (Eigen::Index j = 0; j < adjacency.cols(); ++j)
      if (adjacency(i, j) > 0.0)
        edges.push_back({static_cast<int>(i), static_cast<int>(j), adjacency(i, j)});
  return strongly_connected(static_cast<int>(adjacency.rows()), edges);
}

MonodromySet monodromy(const SystemMatrices& mats) {
  if (mats.p < 1) throw InvalidInput("monodromy: period must be >= 1");

  MonodromySet out;
  out.products.reserve(static_cast<size_t>(mats.p));
  out.rho.reserve(static_cast<size_t>(mats.p));
  for (int k = 0; k < mats.p; ++k) {
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(mats.n, mats.n);
    for (int j = 0; j < mats.p; ++j) prod = mats.m[static_cast<size_t>((k + j) % mats.p)] * prod;
    out.rho.push_back(spectral_radius(prod));
    out.products.push_back(std::move(prod));
  }

  // The cyclic rotations share their spectrum exactly; a visible spread is
  // numerical breakdown. Re-do the radii densely once before giving up.
  auto spread = [](const std::vector<double>& rho) {
    const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
    const double scale = std::max(*hi, std::numeric_limits<double>::min());
    return (*hi - *lo) / scale;
  };
  if (spread(out.rho) > kMonodromySpreadTol) {
    for (int k = 0; k < mats.p; ++k)
      out.rho[static_cast<size_t>(k)] = dense_spectral_radius(out.products[static_cast<size_t>(k)]);
    if (spread(out.rho) > kMonodromySpreadTol)
      throw NumericalBreakdown("monodromy: spectral radius varies across cyclic rotations");
  }
  return out;
}

CyclicLift cyclic_lift(const SystemMatrices& mats) {
  const int n = mats.n;
  const int p = mats.p;

  CyclicLift lift;
  lift.mtilde = Eigen::MatrixXd::Zero(p * n, p * n);
  lift.mtilde.block(0, (p - 1) * n, n, n) = mats.m[static_cast<size_t>(p - 1)];
  for (int r = 1; r < p; ++r)
    lift.mtilde.block(r * n, (r - 1) * n, n, n) = mats.m[static_cast<size_t>(r - 1)];

  lift.mtilde_p = lift.mtilde;
  for (int j = 1; j < p; ++j) lift.mtilde_p = lift.mtilde * lift.mtilde_p;

  // mtilde^p must be block diagonal with the p monodromy products.
  const MonodromySet mono = monodromy(mats);
  Eigen::MatrixXd assembled = Eigen::MatrixXd::Zero(p * n, p * n);
  for (int k = 0; k < p; ++k)
    assembled.block(k * n, k * n, n, n) = mono.products[static_cast<size_t>(k)];
  const double scale = std::max(1.0, assembled.lpNorm<Eigen::Infinity>());
  if ((lift.mtilde_p - assembled).lpNorm<Eigen::Infinity>() > 1e-9 * scale)
    throw NumericalBreakdown("cyclic_lift: mtilde^p does not match the monodromy blocks");

  lift.rho = std::pow(mono.radius(), 1.0 / static_cast<double>(p));
  return lift;
}

JsrBounds jsr_bounds(const std::vector<Eigen::MatrixXd>& mats, int depth, long budget) {
  if (mats.empty()) throw InvalidInput("jsr_bounds: empty matrix set");
  if (depth < 1) throw InvalidInput("jsr_bounds: depth must be >= 1");
  const Eigen::Index n = mats.front().rows();
  for (const Eigen::MatrixXd& m : mats) {
    require_nonnegative_square(m, "jsr_bounds");
    if (m.rows() != n) throw InvalidInput("jsr_bounds: matrices must share one size");
  }
  const int fam = static_cast<int>(mats.size());

  // Trim the depth so that complete lengths fit the product budget.
  JsrBounds out;
  int usable_depth = 0;
  long total = 0;
  long level = 1;
  for (int d = 1; d <= depth; ++d) {
    if (level > budget / fam) break;  // level * fam would overflow the budget
    level *= fam;
    if (total + level > budget) break;
    total += level;
    usable_depth = d;
  }
  if (usable_depth == 0)
    throw InvalidInput("jsr_bounds: budget admits no complete product length");
  out.truncated = usable_depth < depth;
  out.depth = usable_depth;

  std::vector<double> max_norm(static_cast<size_t>(usable_depth) + 1, 0.0);
  out.lower = -1.0;
  out.per_length_lower.assign(static_cast<size_t>(usable_depth), 0.0);

  // Depth-first over all factor words; the running product carries
  // M[word[d-1]] ... M[word[0]].
  std::vector<int> word;
  auto visit = [&](auto&& self, const Eigen::MatrixXd& prod) -> void {
    const int d = static_cast<int>(word.size());
    max_norm[static_cast<size_t>(d)] =
        std::max(max_norm[static_cast<size_t>(d)], induced_inf_norm(prod));
    const double candidate = std::pow(spectral_radius(prod, 1e-10, 20000),
                                      1.0 / static_cast<double>(d));
    out.per_length_lower[static_cast<size_t>(d - 1)] =
        std::max(out.per_length_lower[static_cast<size_t>(d - 1)], candidate);
    if (candidate > out.lower) {
      out.lower = candidate;
      out.witness = word;
    }
    if (d == usable_depth) return;
    for (int f = 0; f < fam; ++f) {
      word.push_back(f);
      self(self, Eigen::MatrixXd(mats[static_cast<size_t>(f)] * prod));
      word.pop_back();
    }
  };
  for (int f = 0; f < fam; ++f) {
    word.push_back(f);
    visit(visit, mats[static_cast<size_t>(f)]);
    word.pop_back();
  }

  out.upper = std::numeric_limits<double>::infinity();
  for (int d = 1; d <= usable_depth; ++d)
    out.upper = std::min(out.upper,
                         std::pow(max_norm[static_cast<size_t>(d)], 1.0 / static_cast<double>(d)));
  // Rounding can push the two within an ulp of each other on tight sets;
  // lowering a certified lower bound is always safe.
  out.lower = std::min(out.lower, out.upper);
  return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> subinvariant_vectors(const Eigen::MatrixXd& m,
                                                                 double mu) {
  require_nonnegative_square(m, "subinvariant_vectors");
  if (!(mu > 0.0)) throw InvalidInput("subinvariant_vectors: mu must be positive");
  const Eigen::Index n = m.rows();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  auto solve = [&](const Eigen::MatrixXd& mm) {
    Eigen::MatrixXd lhs = -mm;
    lhs.diagonal().array() += mu;
    Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(lhs).solve(ones);
    // The Neumann series (sum_k M^k / mu^{k+1}) 1 is entrywise positive, so a
    // nonpositive entry or a visible residual means mu is too close to rho.
    if (!x.allFinite() || (x.array() <= 0.0).any() ||
        (lhs * x - ones).lpNorm<Eigen::Infinity>() > 1e-6)
      throw NumericalBreakdown("subinvariant_vectors: solve unreliable, mu too close to rho(M)");
    return x;
  };

  Eigen::VectorXd xi = solve(m);
  Eigen::VectorXd eta = solve(m.transpose());
  return {std::move(xi), std::move(eta)};
}

PerronPair perron_vectors(const Eigen::MatrixXd& m) {
  require_nonnegative_square(m, "perron_vectors");
  if (!strongly_connected(m))
    throw InvalidInput("perron_vectors: support graph is reducible");

  const Eigen::Index n = m.rows();
  PerronPair out;
  if (n == 1) {
    out.right = Eigen::VectorXd::Ones(1);
    out.left = Eigen::VectorXd::Ones(1);
    out.rho = m(0, 0);
    return out;
  }

  // A large shift costs nothing in exactness (the eigenvectors of M and
  // M + eps I coincide) and widens the modulus gap on imprimitive graphs
  // far more than the small shift used for plain radius estimates.
  const double eps = std::max(1.0, m.maxCoeff());

  auto perron_of = [&](const Eigen::MatrixXd& mm) {
    PowerResult r = shifted_power_iteration(mm, eps, 1e-13, 1e-12, 300000);
    Eigen::VectorXd v = r.vec;
    if (!r.converged && n <= 512) {
      // Dense rescue: take |eigenvector| of the dominant eigenvalue, then
      // polish; for irreducible nonnegative matrices that vector is Perron.
      Eigen::EigenSolver<Eigen::MatrixXd> es(mm);
      if (es.info() == Eigen::Success) {
        Eigen::Index which = 0;
        es.eigenvalues().array().abs().maxCoeff(&which);
        v = es.eigenvectors().col(which).cwiseAbs();
        for (int it = 0; it < 100; ++it) {
          Eigen::VectorXd w = mm * v + eps * v;
          v = w / w.norm();
        }
      }
    }
    v /= v.maxCoeff();
    return v;
  };

  out.right = perron_of(m);
  out.left = perron_of(m.transpose());

  // At the Perron vector all Collatz-Wielandt ratios coincide with rho.
  const Eigen::VectorXd mv = m * out.right;
  out.rho = mv.dot(out.right) / out.right.squaredNorm();

  const double resid_r = (mv - out.rho * out.right).lpNorm<Eigen::Infinity>();
  const double resid_l =
      (m.transpose() * out.left - out.rho * out.left).lpNorm<Eigen::Infinity>();
  if ((out.right.array() <= 0.0).any() || (out.left.array() <= 0.0).any() ||
      resid_r > 1e-9 || resid_l > 1e-9)
    throw NumericalBreakdown("perron_vectors: iteration failed to reach the residual target");
  return out;
}

}  // namespace episim
