#pragma once

// Dense real linear algebra for desk-scale least-squares experiments.
//
// Matrices are row-major and immutable once handed to a problem. Rows are
// contiguous spans; columns are read through index accessors.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rgs::linalg {

using Vector = std::vector<double>;

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

  Vector column(std::size_t j) const;  // copy
  std::span<const double> entries() const noexcept { return data_; }

  DenseMatrix transpose() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Vector helpers. All of them check lengths and throw ContractViolation.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double sq_norm(std::span<const double> a);
Vector add(std::span<const double> a, std::span<const double> b);
Vector sub(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);
void axpy(double alpha, std::span<const double> x, std::span<double> y);  // y += alpha x

Vector matvec(const DenseMatrix& A, std::span<const double> x);
Vector matvec_transpose(const DenseMatrix& A, std::span<const double> y);  // A^T y
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);

Vector column_sq_norms(const DenseMatrix& A);
Vector row_sq_norms(const DenseMatrix& A);
double frob_sq(const DenseMatrix& A);
double frob_norm(const DenseMatrix& A);
double max_abs(const DenseMatrix& A);
bool all_finite(std::span<const double> v);

// A = U diag(sigma) V^T with full square U (m x m) and V (n x n).
struct SvdFactorization {
  DenseMatrix U;
  Vector sigma;  // nonincreasing, length min(m, n)
  DenseMatrix V;
  std::size_t rank = 0;
  double rank_tol = 1e-10;

  // Singular triplet accessors, 1-based to match the usual u_1 .. u_r labelling.
  Vector left(std::size_t ell) const { return U.column(ell - 1); }
  Vector right(std::size_t ell) const { return V.column(ell - 1); }
  double value(std::size_t ell) const { return sigma.at(ell - 1); }
  double smallest_nonzero() const { return rank == 0 ? 0.0 : sigma[rank - 1]; }
};

struct SvdOptions {
  double rank_tol = 1e-10;  // relative to sigma[0]
  int max_sweeps = 60;
};

// One-sided (Hestenes) Jacobi SVD. Throws ConvergenceError if the pairwise
// column orthogonality test does not pass within max_sweeps sweeps.
SvdFactorization svd(const DenseMatrix& A, SvdOptions options = {});

// x = V_r Sigma_r^{-1} U_r^T b using the first `rank` triplets; zero when rank is 0.
Vector min_norm_lsq(const SvdFactorization& f, std::span<const double> b);
Vector min_norm_lsq(const DenseMatrix& A, std::span<const double> b);

// Orthogonal projector onto the row space R(A^T) (span of v_1..v_r) applied to x.
Vector project_row_space(const SvdFactorization& f, std::span<const double> x);
// Orthogonal projector onto the column space R(A) (span of u_1..u_r) applied to y.
Vector project_column_space(const SvdFactorization& f, std::span<const double> y);

// A least-squares instance with everything the solvers and oracles need cached.
// Immutable after construction and safe to share across threads.
class LsqProblem {
 public:
  LsqProblem(DenseMatrix A, Vector b, SvdOptions options = {});

  const DenseMatrix& A() const noexcept { return A_; }
  const DenseMatrix& At() const noexcept { return At_; }  // columns of A as contiguous rows
  const Vector& b() const noexcept { return b_; }
  const SvdFactorization& svd() const noexcept { return svd_; }
  const Vector& x_star() const noexcept { return x_star_; }
  const Vector& Ax_star() const noexcept { return Ax_star_; }
  const Vector& column_sq_norms() const noexcept { return col_sq_; }
  const Vector& row_sq_norms() const noexcept { return row_sq_; }
  double frob_sq() const noexcept { return frob_sq_; }

  std::size_t rows() const noexcept { return A_.rows(); }
  std::size_t cols() const noexcept { return A_.cols(); }
  std::size_t rank() const noexcept { return svd_.rank; }

  // 1 - sigma_ell^2 / ||A||_F^2, the per-step contraction along singular pair ell.
  double contraction(std::size_t ell) const;
  // Same for the smallest nonzero singular value.
  double worst_contraction() const;

 private:
  DenseMatrix A_;
  DenseMatrix At_;
  Vector b_;
  SvdFactorization svd_;
  Vector x_star_;
  Vector Ax_star_;
  Vector col_sq_;
  Vector row_sq_;
  double frob_sq_ = 0.0;
};

}  // namespace rgs::linalg
