#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rgs/errors.hpp"
#include "rgs/linalg.hpp"

namespace rgs::linalg {

namespace {

using Columns = std::vector<Vector>;

double col_dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void rotate(Vector& p, Vector& q, double c, double s) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p[i];
    const double b = q[i];
    p[i] = c * a - s * b;
    q[i] = s * a + c * b;
  }
}

// Appends unit vectors to `basis` (each of length dim) until it holds `target`
// orthonormal columns. Candidates are the standard basis vectors; each is
// orthogonalized twice against the current basis.
void complete_basis(Columns& basis, std::size_t dim, std::size_t target) {
  std::size_t k = 0;
  std::size_t scanned = 0;
  while (basis.size() < target) {
    if (scanned > 2 * dim) throw ConvergenceError("svd: failed to complete orthonormal basis");
    Vector e(dim, 0.0);
    e[k % dim] = 1.0;
    ++k;
    ++scanned;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        const double c = col_dot(q, e);
        for (std::size_t i = 0; i < dim; ++i) e[i] -= c * q[i];
      }
    }
    const double nrm = norm2(e);
    const double remaining = static_cast<double>(dim - basis.size()) / static_cast<double>(dim);
    // Some standard basis vector always has squared residual >= remaining.
    if (nrm * nrm < 0.5 * remaining) continue;
    for (double& v : e) v /= nrm;
    basis.push_back(std::move(e));
    scanned = 0;
  }
}

DenseMatrix from_columns(const Columns& cols, std::size_t rows) {
  DenseMatrix M(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) M(i, j) = cols[j][i];
  return M;
}

// Tall case, m >= n.
SvdFactorization jacobi_tall(const DenseMatrix& A, const SvdOptions& options) {
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  constexpr double eps = std::numeric_limits<double>::epsilon();

  Columns W(n, Vector(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) W[j][i] = A(i, j);
  Columns V(n, Vector(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) V[j][j] = 1.0;

  const double frob = frob_norm(A);
  const double negligible_sq = (eps * frob) * (eps * frob);
  const double tol = static_cast<double>(m) * eps;

  bool converged = n < 2 || frob == 0.0;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = col_dot(W[p], W[p]);
        const double beta = col_dot(W[q], W[q]);
        if (alpha <= negligible_sq || beta <= negligible_sq) continue;
        const double gamma = col_dot(W[p], W[q]);
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(W[p], W[q], c, s);
        rotate(V[p], V[q], c, s);
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("svd: one-sided Jacobi did not converge within " +
                           std::to_string(options.max_sweeps) + " sweeps");
  }

  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(W[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  SvdFactorization f;
  f.rank_tol = options.rank_tol;
  f.sigma.resize(n);
  Columns Vs(n);
  for (std::size_t j = 0; j < n; ++j) {
    f.sigma[j] = sigma[order[j]];
    Vs[j] = std::move(V[order[j]]);
  }

  const double smax = f.sigma.empty() ? 0.0 : f.sigma[0];
  f.rank = 0;
  if (smax > 0.0) {
    for (double s : f.sigma)
      if (s > options.rank_tol * smax) ++f.rank;
  }

  // Left vectors from A v_j / sigma_j wherever that direction is numerically
  // meaningful; the rest of U is an orthonormal completion.
  const double direction_floor = smax * 1e3 * eps;
  Columns U;
  U.reserve(m);
  for (std::size_t j = 0; j < n; ++j) {
    if (f.sigma[j] <= direction_floor) break;
    Vector u = std::move(W[order[j]]);
    for (double& v : u) v /= f.sigma[j];
    U.push_back(std::move(u));
  }
  complete_basis(U, m, m);

  f.U = from_columns(U, m);
  f.V = from_columns(Vs, n);
  return f;
}

}  // namespace

SvdFactorization svd(const DenseMatrix& A, SvdOptions options) {
  if (!all_finite(A.entries())) throw ContractViolation("svd: non-finite entry");
  if (A.rows() >= A.cols()) return jacobi_tall(A, options);
  SvdFactorization t = jacobi_tall(A.transpose(), options);
  std::swap(t.U, t.V);
  return t;
}

}  // namespace rgs::linalg
