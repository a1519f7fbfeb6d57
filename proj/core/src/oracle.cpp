#include "rgs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rgs/errors.hpp"

namespace rgs::oracle {

using linalg::dot;
using linalg::matvec;
using linalg::matvec_transpose;
using linalg::norm2;
using linalg::sq_norm;
using linalg::sub;

namespace {

void require_ell(const LsqProblem& problem, std::size_t ell) {
  if (ell == 0 || ell > problem.rank()) {
    throw ContractViolation("singular index " + std::to_string(ell) + " outside 1.." +
                            std::to_string(problem.rank()));
  }
}

void require_len(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw ContractViolation(std::string(what) + ": expected length " + std::to_string(n) +
                            ", got " + std::to_string(v.size()));
  }
}

// Image-space error A x - A x*.
Vector image_error(const LsqProblem& problem, std::span<const double> x) {
  require_len(x, problem.cols(), "image_error");
  return sub(matvec(problem.A(), x), problem.Ax_star());
}

double column_probability(const LsqProblem& problem, std::size_t j) {
  return problem.column_sq_norms()[j] / problem.frob_sq();
}

double row_probability(const LsqProblem& problem, std::size_t i) {
  return problem.row_sq_norms()[i] / problem.frob_sq();
}

// Calls visit(j, p_j, x+, w+) for every column with positive probability.
template <typename Visit>
void for_each_column_step(const LsqProblem& problem, std::span<const double> x,
                          const EnumerationOptions& opts, Visit&& visit) {
  require_len(x, problem.cols(), "enumeration");
  const Vector w0 = matvec(problem.A(), x);
  Vector xs(x.size());
  Vector ws(w0.size());
  for (std::size_t j = 0; j < problem.cols(); ++j) {
    const double p = column_probability(problem, j);
    if (p == 0.0) continue;
    std::copy(x.begin(), x.end(), xs.begin());
    std::copy(w0.begin(), w0.end(), ws.begin());
    opts.column_update(xs, ws, problem.At().row(j), problem.b(), solvers::ColumnIndex{j});
    visit(j, p, static_cast<const Vector&>(xs), static_cast<const Vector&>(ws));
  }
}

double pow_k(double base, std::size_t k) { return std::pow(base, static_cast<double>(k)); }

}  // namespace

double relative_deviation(double got, double expected, double scale) {
  const double denom = std::max({std::abs(expected), std::abs(scale), 1e-300});
  return std::abs(got - expected) / denom;
}

double left_projection(const LsqProblem& problem, std::span<const double> x, std::size_t ell) {
  require_ell(problem, ell);
  return dot(image_error(problem, x), problem.svd().left(ell));
}

double right_projection(const LsqProblem& problem, std::span<const double> x, std::size_t ell) {
  require_ell(problem, ell);
  require_len(x, problem.cols(), "right_projection");
  return dot(sub(x, problem.x_star()), problem.svd().right(ell));
}

double enum_rgs_projection_step(const LsqProblem& problem, std::span<const double> x,
                                std::size_t ell, const EnumerationOptions& opts) {
  require_ell(problem, ell);
  const Vector u = problem.svd().left(ell);
  double acc = 0.0;
  for_each_column_step(problem, x, opts,
                       [&](std::size_t, double p, const Vector&, const Vector& w) {
                         acc += p * dot(sub(w, problem.Ax_star()), u);
                       });
  return acc;
}

double rgs_projection_step(const LsqProblem& problem, std::span<const double> x, std::size_t ell) {
  return problem.contraction(ell) * left_projection(problem, x, ell);
}

double enum_rgs_sq_error_step(const LsqProblem& problem, std::span<const double> x,
                              const EnumerationOptions& opts) {
  const Vector e = image_error(problem, x);
  if (norm2(e) == 0.0) {
    throw DegenerateInstance("enum_rgs_sq_error_step: A x equals A x*", 0);
  }
  double acc = 0.0;
  for_each_column_step(problem, x, opts,
                       [&](std::size_t, double p, const Vector&, const Vector& w) {
                         acc += p * sq_norm(sub(w, problem.Ax_star()));
                       });
  return acc;
}

double rgs_sq_error_step(const LsqProblem& problem, std::span<const double> x) {
  const Vector e = image_error(problem, x);
  const double e_sq = sq_norm(e);
  if (e_sq == 0.0) throw DegenerateInstance("rgs_sq_error_step: A x equals A x*", 0);
  // ||A^T e_hat||^2 ||e||^2 = ||A^T e||^2
  const double at_e_sq = sq_norm(matvec_transpose(problem.A(), e));
  return e_sq - at_e_sq / problem.frob_sq();
}

double enum_rgs_fluctuation_step(const LsqProblem& problem, std::span<const double> x,
                                 const EnumerationOptions& opts) {
  const Vector e = image_error(problem, x);
  const double e_norm = norm2(e);
  if (e_norm == 0.0) {
    throw DegenerateInstance("enum_rgs_fluctuation_step: A x equals A x*", 0);
  }
  double acc = 0.0;
  for_each_column_step(problem, x, opts,
                       [&](std::size_t j, double p, const Vector&, const Vector& w) {
                         const Vector e_next = sub(w, problem.Ax_star());
                         const double next_norm = norm2(e_next);
                         if (next_norm <= 1e-12 * e_norm) {
                           throw DegenerateInstance(
                               "enum_rgs_fluctuation_step: column " + std::to_string(j) +
                                   " zeroes the error; direction undefined",
                               j);
                         }
                         const double c = dot(e, e_next) / (e_norm * next_norm);
                         acc += p * c * c;
                       });
  return acc;
}

double rgs_fluctuation_step(const LsqProblem& problem, std::span<const double> x) {
  const Vector e = image_error(problem, x);
  const double e_sq = sq_norm(e);
  if (e_sq == 0.0) throw DegenerateInstance("rgs_fluctuation_step: A x equals A x*", 0);
  return 1.0 - sq_norm(matvec_transpose(problem.A(), e)) / (e_sq * problem.frob_sq());
}

TheoryPrediction closed_form_rgs_projection(const LsqProblem& problem, std::span<const double> x0,
                                            std::size_t ell, std::size_t k) {
  const double f = problem.contraction(ell);
  return {ell, k, pow_k(f, k) * left_projection(problem, x0, ell)};
}

TheoryPrediction closed_form_rgs_residual_projection(const LsqProblem& problem,
                                                     std::span<const double> r0, std::size_t ell,
                                                     std::size_t k) {
  require_ell(problem, ell);
  require_len(r0, problem.rows(), "closed_form_rgs_residual_projection");
  const Vector r_star = sub(problem.b(), problem.Ax_star());
  const double f = problem.contraction(ell);
  return {ell, k, pow_k(f, k) * dot(sub(r0, r_star), problem.svd().left(ell))};
}

TheoryPrediction closed_form_rk_projection(const LsqProblem& problem, std::span<const double> x0,
                                           std::size_t ell, std::size_t k) {
  const double f = problem.contraction(ell);
  return {ell, k, pow_k(f, k) * right_projection(problem, x0, ell)};
}

double enum_regs_projection_step(const LsqProblem& problem, std::span<const double> x_next,
                                 std::span<const double> z, std::size_t ell) {
  require_ell(problem, ell);
  require_len(x_next, problem.cols(), "enum_regs_projection_step");
  require_len(z, problem.cols(), "enum_regs_projection_step");
  const Vector v = problem.svd().right(ell);
  Vector zs(z.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < problem.rows(); ++i) {
    const double q = row_probability(problem, i);
    if (q == 0.0) continue;
    std::copy(z.begin(), z.end(), zs.begin());
    const auto row = problem.A().row(i);
    solvers::kaczmarz_inplace(zs, row, dot(row, x_next));
    acc += q * dot(sub(zs, problem.x_star()), v);
  }
  return acc;
}

double regs_projection_step(const LsqProblem& problem, std::span<const double> x_next,
                            std::span<const double> z, std::size_t ell) {
  const double f = problem.contraction(ell);
  const Vector Av = matvec(problem.A(), problem.svd().right(ell));
  return f * right_projection(problem, z, ell) +
         dot(image_error(problem, x_next), Av) / problem.frob_sq();
}

double enum_regs_sq_error_step(const LsqProblem& problem, std::span<const double> x,
                               std::span<const double> z, const EnumerationOptions& opts) {
  require_len(z, problem.cols(), "enum_regs_sq_error_step");
  Vector zs(z.size());
  double acc = 0.0;
  for_each_column_step(problem, x, opts,
                       [&](std::size_t, double p, const Vector& x_next, const Vector&) {
                         for (std::size_t i = 0; i < problem.rows(); ++i) {
                           const double q = row_probability(problem, i);
                           if (q == 0.0) continue;
                           std::copy(z.begin(), z.end(), zs.begin());
                           const auto row = problem.A().row(i);
                           solvers::kaczmarz_inplace(zs, row, dot(row, x_next));
                           acc += p * q * sq_norm(sub(zs, problem.x_star()));
                         }
                       });
  return acc;
}

TheoryPrediction closed_form_regs_projection(const LsqProblem& problem,
                                             std::span<const double> x0,
                                             std::span<const double> z0, std::size_t ell,
                                             std::size_t k) {
  require_ell(problem, ell);
  const double F = problem.frob_sq();
  const double fk = pow_k(problem.contraction(ell), k);
  const Vector At_e = matvec_transpose(problem.A(), image_error(problem, x0));
  const double drive = dot(At_e, problem.svd().right(ell));
  const double value = fk * right_projection(problem, z0, ell) +
                       static_cast<double>(k) / F * fk * drive;
  return {ell, k, value};
}

TheoryPrediction closed_form_regs_A_projection(const LsqProblem& problem,
                                               std::span<const double> x0,
                                               std::span<const double> z0, std::size_t ell,
                                               std::size_t k) {
  require_ell(problem, ell);
  const double F = problem.frob_sq();
  const double fk = pow_k(problem.contraction(ell), k);
  const Vector u = problem.svd().left(ell);
  const Vector AAt_e =
      matvec(problem.A(), matvec_transpose(problem.A(), image_error(problem, x0)));
  const double value = fk * dot(image_error(problem, z0), u) +
                       static_cast<double>(k) / F * fk * dot(AAt_e, u);
  return {ell, k, value};
}

double bound_rgs(const LsqProblem& problem, std::span<const double> x0, std::size_t k) {
  return pow_k(problem.worst_contraction(), k) * sq_norm(image_error(problem, x0));
}

double bound_regs(const LsqProblem& problem, std::span<const double> x0,
                  std::span<const double> z0, std::size_t k) {
  require_len(z0, problem.cols(), "bound_regs");
  const double fk = pow_k(problem.worst_contraction(), k);
  return fk * sq_norm(sub(z0, problem.x_star())) +
         static_cast<double>(k) / problem.frob_sq() * fk * sq_norm(image_error(problem, x0));
}

double bound_regs_step(const LsqProblem& problem, std::span<const double> z_prev,
                       std::span<const double> x0, std::size_t k) {
  require_len(z_prev, problem.cols(), "bound_regs_step");
  const double F = problem.frob_sq();
  const Vector dz = sub(z_prev, problem.x_star());
  const double dz_sq = sq_norm(dz);
  double first = 0.0;
  if (dz_sq > 0.0) {
    // (1 - ||A z_hat||^2/F) ||dz||^2 = ||dz||^2 - ||A dz||^2 / F
    first = dz_sq - sq_norm(matvec(problem.A(), dz)) / F;
  }
  const double second =
      pow_k(problem.worst_contraction(), k) * sq_norm(image_error(problem, x0)) / F;
  return first + second;
}

}  // namespace rgs::oracle
