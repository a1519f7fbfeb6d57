#pragma once

// Direction metrics for solver iterates and Monte Carlo aggregation.
//
// Every quantity is measured on the "tracked" iterate: x_k for RGS and RK,
// z_k for REGS. Signed projections feed expectation tests; absolute
// direction projections and Rayleigh ratios feed the convergence-direction
// figures. Undefined values (the error vanished) are carried as empty
// optionals and treated as missing data, never as zeros.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rgs/linalg.hpp"
#include "rgs/solvers.hpp"

namespace rgs::diagnostics {

using linalg::LsqProblem;
using linalg::Vector;

enum class Quantity {
  DirectionProjection,    // |<(A t - A x*)/||A t - A x*||, u_ell>|
  RayleighRatio,          // ||A(t - x*)|| / ||t - x*||
  SqError,                // ||A x - A x*||^2 (RGS), ||z - x*||^2 (REGS), ||x - x*||^2 (RK)
  ProjectionSigned,       // <A t - A x*, u_ell>
  RightProjectionSigned,  // <t - x*, v_ell>
};

std::string_view to_string(Quantity q);
std::optional<Quantity> parse_quantity(std::string_view name);
bool needs_ell(Quantity q);

struct QuantitySpec {
  Quantity quantity;
  std::optional<std::size_t> ell;  // 1-based, required when needs_ell(quantity)
};

// |<(y - A x*)/||y - A x*||, u_ell>| for an image-space vector y.
std::optional<double> direction_projection(const LsqProblem& problem, std::span<const double> y,
                                           std::size_t ell);
// ||A(x - x*)|| / ||x - x*||
std::optional<double> rayleigh_ratio(const LsqProblem& problem, std::span<const double> x);

// Evaluates a quantity on one iterate of `method`.
std::optional<double> evaluate(const LsqProblem& problem, solvers::Method method,
                               const solvers::IterateView& it, const QuantitySpec& spec);

struct TraceRecord {
  std::size_t trial_id = 0;
  std::size_t k = 0;
  QuantitySpec spec{Quantity::SqError, std::nullopt};
  std::optional<double> value;  // empty = undefined
};

struct RunSummary {
  QuantitySpec spec{Quantity::SqError, std::nullopt};
  std::vector<std::size_t> k_grid;
  std::vector<double> mean;
  std::vector<double> std_error;  // sample stddev / sqrt(count)
  std::vector<double> median;
  std::vector<std::size_t> count;  // defined values per k
  std::size_t trials = 0;
  std::size_t failed_trials = 0;
};

struct TrialOutcome {
  bool failed = false;
  std::string error;
  // values[q][g]: quantity q at k_grid[g]; empty optional = undefined or not reached.
  std::vector<std::vector<std::optional<double>>> values;
};

struct MonteCarloResult {
  std::vector<QuantitySpec> quantities;
  std::vector<std::size_t> k_grid;
  std::vector<TrialOutcome> trials;
  std::vector<RunSummary> summaries;  // one per quantity, same order
  std::size_t failed_trials = 0;
};

struct MonteCarloOptions {
  solvers::InitialState initial;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Runs `trials` independent solver runs on streams derive_stream(seed, trial)
// and records each quantity at each k in k_grid. max_iters and trace_every in
// `config` are overridden to fit the grid. Failed trials are recorded and
// excluded from the summaries. Results do not depend on the thread count.
MonteCarloResult monte_carlo(const LsqProblem& problem, const solvers::SolverConfig& config,
                             std::span<const QuantitySpec> quantities,
                             std::span<const std::size_t> k_grid, std::size_t trials,
                             const MonteCarloOptions& options = {});

RunSummary monte_carlo(const LsqProblem& problem, const solvers::SolverConfig& config,
                       QuantitySpec quantity, std::span<const std::size_t> k_grid,
                       std::size_t trials, const MonteCarloOptions& options = {});

// Summary statistics over the defined entries of one column of trial values.
RunSummary summarize(const MonteCarloResult& result, std::size_t quantity_index);

// --- expectation checks against closed-form predictions ---------------------

struct ExpectationPoint {
  std::size_t k = 0;
  double predicted = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ExpectationReport {
  QuantitySpec spec{Quantity::ProjectionSigned, std::nullopt};
  std::vector<ExpectationPoint> points;
  std::size_t trials = 0;
  bool rerun = false;
  bool passed = false;
};

// Compares the trial mean with predict(k) at every grid point. A point passes
// when |mean - predicted| <= n_se * std_error (plus a 1e-12 rounding floor).
// If any point fails, the experiment is rerun once with 4x the trials and
// that second run decides.
ExpectationReport check_expectation(const LsqProblem& problem,
                                    const solvers::SolverConfig& config, QuantitySpec quantity,
                                    std::span<const std::size_t> k_grid, std::size_t trials,
                                    const std::function<double(std::size_t)>& predict,
                                    double n_se = 4.0, const MonteCarloOptions& options = {});

// --- convergence-direction phenomena ----------------------------------------

struct DirectionPhenomenon {
  double early_max = 0.0;   // max median direction projection over the first 10% of the grid
  double late_min = 0.0;    // min median direction projection over the last 10% of the grid
  double final_ratio = 0.0; // final median Rayleigh ratio / sigma_r
  double worst_rise = 0.0;  // max over consecutive grid points of median[g]/median[g-1]
  bool early_small = false; // early_max < 0.2
  bool late_aligned = false; // late_min > 0.99
  bool ratio_near_sigma_r = false; // final ratio within a factor 2 of sigma_r
  bool ratio_nonincreasing = false; // worst_rise <= 1.05
};

// `direction` and `rayleigh` must share a k grid starting at 0.
DirectionPhenomenon assess_direction_phenomenon(const RunSummary& direction,
                                                const RunSummary& rayleigh, double sigma_r);

}  // namespace rgs::diagnostics
