#include "rgs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rgs/errors.hpp"

namespace rgs::linalg {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b, const char* op) {
  if (a.size() != b.size()) {
    throw ContractViolation(std::string(op) + ": length mismatch (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw ContractViolation("DenseMatrix: expected " + std::to_string(rows_ * cols_) +
                            " entries, got " + std::to_string(data_.size()));
  }
  if (!all_finite(data_)) throw ContractViolation("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix D(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) D(i, i) = diag[i];
  return D;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.begin()->size();
  std::vector<double> entries;
  entries.reserve(m * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw ContractViolation("DenseMatrix::from_rows: ragged rows");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return DenseMatrix(m, n, std::move(entries));
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix T(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
  return T;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sq_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double norm2(std::span<const double> a) {
  // Scaled accumulation so that tiny error vectors near convergence do not underflow.
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : a) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

Vector add(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b, "add");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector sub(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b, "sub");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector scaled(std::span<const double> a, double s) {
  Vector r(a.begin(), a.end());
  for (double& v : r) v *= s;
  return r;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_same_length(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector matvec(const DenseMatrix& A, std::span<const double> x) {
  if (x.size() != A.cols()) {
    throw ContractViolation("matvec: x has length " + std::to_string(x.size()) + ", A has " +
                            std::to_string(A.cols()) + " columns");
  }
  Vector y(A.rows(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const auto r = A.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vector matvec_transpose(const DenseMatrix& A, std::span<const double> y) {
  if (y.size() != A.rows()) {
    throw ContractViolation("matvec_transpose: y has length " + std::to_string(y.size()) +
                            ", A has " + std::to_string(A.rows()) + " rows");
  }
  Vector x(A.cols(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) axpy(y[i], A.row(i), x);
  return x;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.cols() != B.rows()) throw ContractViolation("matmul: inner dimension mismatch");
  DenseMatrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    auto out = C.row(i);
    for (std::size_t k = 0; k < A.cols(); ++k) {
      const double a = A(i, k);
      if (a == 0.0) continue;
      const auto brow = B.row(k);
      for (std::size_t j = 0; j < B.cols(); ++j) out[j] += a * brow[j];
    }
  }
  return C;
}

Vector column_sq_norms(const DenseMatrix& A) {
  Vector s(A.cols(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const auto r = A.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) s[j] += r[j] * r[j];
  }
  return s;
}

Vector row_sq_norms(const DenseMatrix& A) {
  Vector s(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) s[i] = sq_norm(A.row(i));
  return s;
}

double frob_sq(const DenseMatrix& A) { return sq_norm(A.entries()); }

double frob_norm(const DenseMatrix& A) { return norm2(A.entries()); }

double max_abs(const DenseMatrix& A) {
  double m = 0.0;
  for (double v : A.entries()) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Vector min_norm_lsq(const SvdFactorization& f, std::span<const double> b) {
  if (b.size() != f.U.rows()) {
    throw ContractViolation("min_norm_lsq: b has length " + std::to_string(b.size()) +
                            ", expected " + std::to_string(f.U.rows()));
  }
  Vector x(f.V.rows(), 0.0);
  for (std::size_t l = 0; l < f.rank; ++l) {
    double coef = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) coef += f.U(i, l) * b[i];
    coef /= f.sigma[l];
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += coef * f.V(j, l);
  }
  return x;
}

Vector min_norm_lsq(const DenseMatrix& A, std::span<const double> b) {
  return min_norm_lsq(svd(A), b);
}

namespace {

Vector project_onto_columns(const DenseMatrix& Q, std::size_t count, std::span<const double> y) {
  if (y.size() != Q.rows()) throw ContractViolation("projection: length mismatch");
  Vector p(y.size(), 0.0);
  for (std::size_t l = 0; l < count; ++l) {
    double c = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) c += Q(i, l) * y[i];
    for (std::size_t i = 0; i < y.size(); ++i) p[i] += c * Q(i, l);
  }
  return p;
}

}  // namespace

Vector project_row_space(const SvdFactorization& f, std::span<const double> x) {
  return project_onto_columns(f.V, f.rank, x);
}

Vector project_column_space(const SvdFactorization& f, std::span<const double> y) {
  return project_onto_columns(f.U, f.rank, y);
}

LsqProblem::LsqProblem(DenseMatrix A, Vector b, SvdOptions options)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() == 0 || A_.cols() == 0) throw ContractViolation("LsqProblem: empty matrix");
  if (b_.size() != A_.rows()) {
    throw ContractViolation("LsqProblem: b has length " + std::to_string(b_.size()) +
                            ", A has " + std::to_string(A_.rows()) + " rows");
  }
  if (!all_finite(b_)) throw ContractViolation("LsqProblem: non-finite entry in b");
  At_ = A_.transpose();
  svd_ = linalg::svd(A_, options);
  x_star_ = min_norm_lsq(svd_, b_);
  Ax_star_ = matvec(A_, x_star_);
  col_sq_ = linalg::column_sq_norms(A_);
  row_sq_ = linalg::row_sq_norms(A_);
  frob_sq_ = linalg::frob_sq(A_);
}

double LsqProblem::contraction(std::size_t ell) const {
  if (ell == 0 || ell > svd_.rank) {
    throw ContractViolation("singular index " + std::to_string(ell) + " outside 1.." +
                            std::to_string(svd_.rank));
  }
  const double s = svd_.sigma[ell - 1];
  return 1.0 - s * s / frob_sq_;
}

double LsqProblem::worst_contraction() const {
  if (svd_.rank == 0) return 1.0;
  return contraction(svd_.rank);
}

}  // namespace rgs::linalg
