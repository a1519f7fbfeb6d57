#pragma once

// Ground truth for the convergence-direction identities of RGS and REGS.
//
// Two tiers. The enum_* functions compute a one-step conditional expectation
// exactly by summing over every index the sampler could pick, weighted by its
// probability, and applying the real solver kernel to each choice. The
// closed_form_* and bound_* functions evaluate the analytic multi-step
// predictions. Tests compare the two tiers against each other and against
// Monte Carlo runs of the solvers.
//
// Singular indices `ell` are 1-based and must satisfy 1 <= ell <= rank.
// All projections are signed and use the problem's own factorization; the
// identities are sign-covariant, so the same LsqProblem must be used for
// every quantity that is compared.

#include <cstddef>
#include <span>

#include "rgs/linalg.hpp"
#include "rgs/solvers.hpp"

namespace rgs::oracle {

using linalg::LsqProblem;
using linalg::Vector;

struct TheoryPrediction {
  std::size_t ell = 0;
  std::size_t k = 0;
  double value = 0.0;
};

// Signature of the column kernel the enumerations apply. Swappable so that a
// deliberately broken update can be fed through the verification suite.
using ColumnUpdateFn = void (*)(std::span<double> x, std::span<double> w,
                                std::span<const double> column, std::span<const double> b,
                                solvers::ColumnIndex j);

struct EnumerationOptions {
  ColumnUpdateFn column_update = &solvers::rgs_step_inplace;
};

// |got - expected| / max(|expected|, scale); scale guards identities whose
// exact value is near zero and should be the natural magnitude of the inputs.
double relative_deviation(double got, double expected, double scale);

// <A x - A x*, u_ell> and <x - x*, v_ell>.
double left_projection(const LsqProblem& problem, std::span<const double> x, std::size_t ell);
double right_projection(const LsqProblem& problem, std::span<const double> x, std::size_t ell);

// --- RGS, single step -------------------------------------------------------

// sum_j p_j <A x+(j) - A x*, u_ell>
double enum_rgs_projection_step(const LsqProblem& problem, std::span<const double> x,
                                std::size_t ell, const EnumerationOptions& opts = {});
// (1 - sigma_ell^2/||A||_F^2) <A x - A x*, u_ell>
double rgs_projection_step(const LsqProblem& problem, std::span<const double> x, std::size_t ell);

// sum_j p_j ||A x+(j) - A x*||^2. Throws DegenerateInstance when A x = A x*.
double enum_rgs_sq_error_step(const LsqProblem& problem, std::span<const double> x,
                              const EnumerationOptions& opts = {});
// (1 - ||A^T e_hat||^2/||A||_F^2) ||A x - A x*||^2 with e_hat the unit image-space error.
double rgs_sq_error_step(const LsqProblem& problem, std::span<const double> x);

// sum_j p_j <e_hat, e_hat+(j)>^2. Throws DegenerateInstance naming the column
// whose update zeroes the error, since the new direction is then undefined.
double enum_rgs_fluctuation_step(const LsqProblem& problem, std::span<const double> x,
                                 const EnumerationOptions& opts = {});
// 1 - ||A^T e_hat||^2 / ||A||_F^2
double rgs_fluctuation_step(const LsqProblem& problem, std::span<const double> x);

// --- RGS / RK, k steps ------------------------------------------------------

TheoryPrediction closed_form_rgs_projection(const LsqProblem& problem, std::span<const double> x0,
                                            std::size_t ell, std::size_t k);
// r0 is a residual b - A x0; the prediction is for <r_k - r*, u_ell>.
TheoryPrediction closed_form_rgs_residual_projection(const LsqProblem& problem,
                                                     std::span<const double> r0, std::size_t ell,
                                                     std::size_t k);
// Prediction for <x_k - x*, v_ell> under randomized Kaczmarz.
TheoryPrediction closed_form_rk_projection(const LsqProblem& problem, std::span<const double> x0,
                                           std::size_t ell, std::size_t k);

// --- REGS -------------------------------------------------------------------

// sum_i q_i <z+(i) - x*, v_ell> with z+(i) = rk_step(z, A, x_next, i)
double enum_regs_projection_step(const LsqProblem& problem, std::span<const double> x_next,
                                 std::span<const double> z, std::size_t ell);
// (1 - sigma_ell^2/F) <z - x*, v_ell> + (1/F) <A(x_next - x*), A v_ell>
double regs_projection_step(const LsqProblem& problem, std::span<const double> x_next,
                            std::span<const double> z, std::size_t ell);

// sum_{j,i} p_j q_i ||z+(j,i) - x*||^2 over one full REGS step from (x, z).
double enum_regs_sq_error_step(const LsqProblem& problem, std::span<const double> x,
                               std::span<const double> z, const EnumerationOptions& opts = {});

TheoryPrediction closed_form_regs_projection(const LsqProblem& problem,
                                             std::span<const double> x0,
                                             std::span<const double> z0, std::size_t ell,
                                             std::size_t k);
// Prediction for <A z_k - A x*, u_ell>. The leading term projects A z0 - A x*
// onto u_ell (an m-vector cannot be paired with v_ell).
TheoryPrediction closed_form_regs_A_projection(const LsqProblem& problem,
                                               std::span<const double> x0,
                                               std::span<const double> z0, std::size_t ell,
                                               std::size_t k);

// --- bounds -----------------------------------------------------------------

// (1 - sigma_r^2/F)^k ||A x0 - A x*||^2
double bound_rgs(const LsqProblem& problem, std::span<const double> x0, std::size_t k);
// (1 - sigma_r^2/F)^k ||z0 - x*||^2 + (k/F)(1 - sigma_r^2/F)^k ||A x0 - A x*||^2
double bound_regs(const LsqProblem& problem, std::span<const double> x0,
                  std::span<const double> z0, std::size_t k);
// (1 - ||A z_hat||^2/F) ||z_prev - x*||^2 + (1/F)(1 - sigma_r^2/F)^k ||A x0 - A x*||^2.
// The first term is taken as 0 when z_prev = x* (z_hat undefined).
double bound_regs_step(const LsqProblem& problem, std::span<const double> z_prev,
                       std::span<const double> x0, std::size_t k);

}  // namespace rgs::oracle
