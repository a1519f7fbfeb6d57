#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rgs/linalg.hpp"
#include "rgs/sampling.hpp"

namespace rgs::testing {

using linalg::DenseMatrix;
using linalg::Vector;

inline DenseMatrix random_matrix(std::size_t m, std::size_t n, sampling::RngStream& rng) {
  DenseMatrix A(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = rng.gaussian();
  return A;
}

inline Vector random_vector(std::size_t n, sampling::RngStream& rng) {
  Vector v(n);
  for (double& x : v) x = rng.gaussian();
  return v;
}

// Rank-k matrix as a product of Gaussian factors.
inline DenseMatrix random_low_rank(std::size_t m, std::size_t n, std::size_t k,
                                   sampling::RngStream& rng) {
  return linalg::matmul(random_matrix(m, k, rng), random_matrix(k, n, rng));
}

inline double max_abs_diff(const DenseMatrix& A, const DenseMatrix& B) {
  double d = 0.0;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) d = std::max(d, std::abs(A(i, j) - B(i, j)));
  return d;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Dense Gaussian elimination with partial pivoting; test-side oracle only.
inline Vector solve_dense(DenseMatrix M, Vector rhs) {
  const std::size_t n = M.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(M(r, c)) > std::abs(M(p, c))) p = r;
    for (std::size_t j = 0; j < n; ++j) std::swap(M(c, j), M(p, j));
    std::swap(rhs[c], rhs[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = M(r, c) / M(c, c);
      for (std::size_t j = c; j < n; ++j) M(r, j) -= f * M(c, j);
      rhs[r] -= f * rhs[c];
    }
  }
  Vector x(n);
  for (std::size_t c = n; c-- > 0;) {
    double s = rhs[c];
    for (std::size_t j = c + 1; j < n; ++j) s -= M(c, j) * x[j];
    x[c] = s / M(c, c);
  }
  return x;
}

}  // namespace rgs::testing
