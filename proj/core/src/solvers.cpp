#include "rgs/solvers.hpp"

#include <algorithm>
#include <string>

#include "rgs/errors.hpp"
#include "rgs/sampling.hpp"

namespace rgs::solvers {

using linalg::dot;
using linalg::matvec;
using linalg::sq_norm;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::RGS:
      return "rgs";
    case Method::REGS:
      return "regs";
    case Method::RK:
      return "rk";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "rgs") return Method::RGS;
  if (name == "regs") return Method::REGS;
  if (name == "rk") return Method::RK;
  return std::nullopt;
}

void rgs_step_inplace(std::span<double> x, std::span<double> w, std::span<const double> column,
                      std::span<const double> b, ColumnIndex j) {
  if (j.value >= x.size()) throw ContractViolation("rgs_step: column index out of range");
  if (column.size() != w.size() || b.size() != w.size()) {
    throw ContractViolation("rgs_step: dimension mismatch");
  }
  double col_sq = 0.0;
  double numer = 0.0;
  for (std::size_t i = 0; i < column.size(); ++i) {
    col_sq += column[i] * column[i];
    numer += column[i] * (w[i] - b[i]);
  }
  if (col_sq == 0.0) {
    throw ContractViolation("rgs_step: column " + std::to_string(j.value) + " is zero");
  }
  const double step = numer / col_sq;
  x[j.value] -= step;
  for (std::size_t i = 0; i < column.size(); ++i) w[i] -= step * column[i];
}

RgsState rgs_step(RgsState state, const DenseMatrix& A, std::span<const double> b, ColumnIndex j) {
  if (state.x.size() != A.cols() || state.w.size() != A.rows()) {
    throw ContractViolation("rgs_step: state does not match A");
  }
  if (j.value >= A.cols()) throw ContractViolation("rgs_step: column index out of range");
  const Vector column = A.column(j.value);
  rgs_step_inplace(state.x, state.w, column, b, j);
  ++state.k;
  return state;
}

void kaczmarz_inplace(std::span<double> z, std::span<const double> row, double rhs) {
  const double row_sq = sq_norm(row);
  if (row_sq == 0.0) throw ContractViolation("rk_step: zero row");
  const double step = (dot(row, z) - rhs) / row_sq;
  for (std::size_t j = 0; j < z.size(); ++j) z[j] -= step * row[j];
}

Vector rk_step(Vector z, const DenseMatrix& A, std::span<const double> target, RowIndex i) {
  if (z.size() != A.cols() || target.size() != A.cols()) {
    throw ContractViolation("rk_step: dimension mismatch");
  }
  if (i.value >= A.rows()) throw ContractViolation("rk_step: row index out of range");
  const auto row = A.row(i.value);
  if (sq_norm(row) == 0.0) {
    throw ContractViolation("rk_step: row " + std::to_string(i.value) + " is zero");
  }
  kaczmarz_inplace(z, row, dot(row, target));
  return z;
}

RegsState regs_step(RegsState state, const DenseMatrix& A, std::span<const double> b,
                    ColumnIndex j, RowIndex i) {
  RgsState xs = rgs_step(RgsState{std::move(state.x), std::move(state.w), state.k}, A, b, j);
  state.z = rk_step(std::move(state.z), A, xs.x, i);
  return RegsState{std::move(xs.x), std::move(xs.w), std::move(state.z), xs.k};
}

namespace {

bool in_row_space(const LsqProblem& problem, const Vector& z) {
  const Vector p = linalg::project_row_space(problem.svd(), z);
  return linalg::norm2(linalg::sub(z, p)) <= 1e-8 * std::max(1.0, linalg::norm2(z));
}

class TraceSchedule {
 public:
  TraceSchedule(const SolverConfig& config, const TraceHook& hook, RunTrace& trace)
      : every_(config.trace_every), last_(config.max_iters), hook_(hook), trace_(trace) {}

  void maybe(std::size_t k, std::span<const double> x, std::span<const double> w,
             std::span<const double> z) {
    if (k != 0 && k % every_ != 0 && k != last_) return;
    trace_.traced.push_back(k);
    if (hook_) hook_(IterateView{k, x, w, z});
  }

 private:
  std::size_t every_;
  std::size_t last_;
  const TraceHook& hook_;
  RunTrace& trace_;
};

}  // namespace

RunTrace run(const LsqProblem& problem, const SolverConfig& config, const TraceHook& hook,
             const InitialState& initial, std::uint64_t stream_id) {
  if (config.trace_every == 0) throw ContractViolation("run: trace_every must be positive");
  if (config.refresh_every == 0) throw ContractViolation("run: refresh_every must be positive");

  const DenseMatrix& A = problem.A();
  const DenseMatrix& At = problem.At();
  const auto& b = problem.b();
  const std::size_t n = problem.cols();

  Vector x = initial.x0.value_or(Vector(n, 0.0));
  if (x.size() != n) throw ContractViolation("run: x0 has wrong length");

  RunTrace trace{config.method, 0, {}, {}, {}};
  TraceSchedule schedule(config, hook, trace);
  sampling::RngStream rng = sampling::derive_stream(config.master_seed, stream_id);

  switch (config.method) {
    case Method::RGS:
    case Method::REGS: {
      const auto columns = sampling::build_distribution(problem.column_sq_norms());
      std::optional<sampling::DiscreteDistribution> rows;
      Vector z;
      if (config.method == Method::REGS) {
        rows.emplace(problem.row_sq_norms());
        z = initial.z0.value_or(Vector(n, 0.0));
        if (z.size() != n) throw ContractViolation("run: z0 has wrong length");
        if (!in_row_space(problem, z)) {
          throw ContractViolation("run: z0 must lie in the row space of A");
        }
      }
      Vector w = matvec(A, x);
      schedule.maybe(0, x, w, z);
      for (std::size_t k = 1; k <= config.max_iters; ++k) {
        const std::size_t j = columns.sample(rng);
        rgs_step_inplace(x, w, At.row(j), b, ColumnIndex{j});
        if (rows) {
          const std::size_t i = rows->sample(rng);
          const auto row = A.row(i);
          kaczmarz_inplace(z, row, dot(row, x));
        }
        if (k % config.refresh_every == 0) w = matvec(A, x);
        schedule.maybe(k, x, w, z);
      }
      trace.z = std::move(z);
      break;
    }
    case Method::RK: {
      const auto rows = sampling::build_distribution(problem.row_sq_norms());
      schedule.maybe(0, x, {}, {});
      for (std::size_t k = 1; k <= config.max_iters; ++k) {
        const std::size_t i = rows.sample(rng);
        kaczmarz_inplace(x, A.row(i), b[i]);
        schedule.maybe(k, x, {}, {});
      }
      break;
    }
  }
  trace.iterations = config.max_iters;
  trace.x = std::move(x);
  return trace;
}

}  // namespace rgs::solvers
