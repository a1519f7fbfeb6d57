#pragma once

// Randomized Gauss-Seidel (column action), randomized Kaczmarz (row action)
// and the randomized extended Gauss-Seidel method that pairs them.
//
// RGS only guarantees that A x_k converges to A x*. When A lacks full column
// rank, x_k keeps whatever null-space component x_0 had and does not reach the
// minimum-norm solution; use REGS and read z_k in that case.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "rgs/linalg.hpp"

namespace rgs::solvers {

using linalg::DenseMatrix;
using linalg::LsqProblem;
using linalg::Vector;

struct ColumnIndex {
  std::size_t value;
};
struct RowIndex {
  std::size_t value;
};

enum class Method { RGS, REGS, RK };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct RgsState {
  Vector x;
  Vector w;  // cached A x
  std::size_t k = 0;
};

struct RegsState {
  Vector x;
  Vector w;  // cached A x
  Vector z;
  std::size_t k = 0;
};

struct RkState {
  Vector x;
  std::size_t k = 0;
};

struct SolverConfig {
  Method method = Method::RGS;
  std::size_t max_iters = 1000;
  std::uint64_t master_seed = 0;
  std::size_t trace_every = 10;
  std::size_t refresh_every = 1000;
};

// Starting point. Defaults to x_0 = z_0 = 0; z_0 must lie in R(A^T).
struct InitialState {
  std::optional<Vector> x0;
  std::optional<Vector> z0;
};

// Column step: x_j -= A_(j)^T (w - b) / ||A_(j)||^2 and w follows along.
// Throws ContractViolation on a zero column.
void rgs_step_inplace(std::span<double> x, std::span<double> w, std::span<const double> column,
                      std::span<const double> b, ColumnIndex j);
RgsState rgs_step(RgsState state, const DenseMatrix& A, std::span<const double> b, ColumnIndex j);

// Row projection of z onto {y : A^(i) y = rhs}.
void kaczmarz_inplace(std::span<double> z, std::span<const double> row, double rhs);

// One-step RK update for the system A z = A target on row i.
Vector rk_step(Vector z, const DenseMatrix& A, std::span<const double> target, RowIndex i);

// RGS step on (x, w) with column j, then rk_step on z toward the new x with row i.
RegsState regs_step(RegsState state, const DenseMatrix& A, std::span<const double> b,
                    ColumnIndex j, RowIndex i);

// Read-only view of the iterate handed to trace hooks. For RK, `w` is empty;
// `z` is empty unless the method is REGS.
struct IterateView {
  std::size_t k;
  std::span<const double> x;
  std::span<const double> w;
  std::span<const double> z;
};

using TraceHook = std::function<void(const IterateView&)>;

struct RunTrace {
  Method method;
  std::size_t iterations = 0;
  Vector x;
  Vector z;                        // REGS only
  std::vector<std::size_t> traced;  // iteration numbers the hook saw
};

// Runs `config.max_iters` steps on the stream derive_stream(master_seed, stream_id).
// The hook fires at k = 0 and every trace_every steps after that, and at the
// final iteration. RGS and REGS recompute w = A x from scratch every
// refresh_every steps.
RunTrace run(const LsqProblem& problem, const SolverConfig& config, const TraceHook& hook = {},
             const InitialState& initial = {}, std::uint64_t stream_id = 0);

}  // namespace rgs::solvers
