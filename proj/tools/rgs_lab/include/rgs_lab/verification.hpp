#pragma once

// Verification suite behind `rgs-lab verify`.
//
// Exact checks compare an enumeration over every sampled index (weighted by
// its probability) with a closed form, on a small corpus of seeded problems
// and random iterates. Monte Carlo checks compare trial means with multi-step
// closed forms (z-score against the standard error) or with upper bounds.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rgs/linalg.hpp"
#include "rgs/oracle.hpp"
#include "rgs_lab/config.hpp"

namespace rgs::lab {

struct CorpusProblem {
  std::string name;
  linalg::LsqProblem problem;
  std::vector<linalg::Vector> x_iterates;  // arbitrary points
  std::vector<linalg::Vector> z_iterates;  // points in the row space
};

// Five problems of at most 12 x 8: tall, wide, rank-deficient, zero-padded.
std::vector<CorpusProblem> build_corpus(std::uint64_t seed, std::size_t iterates = 20);

struct CheckResult {
  std::string name;
  std::string kind;  // rel: relative deviation, z: standard errors, ratio: mean/bound
  std::size_t cases = 0;
  std::size_t skipped = 0;  // degenerate instances, flagged and not counted
  double max_dev = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// --- exact single-step checks ---------------------------------------------
CheckResult check_rgs_projection_step(const std::vector<CorpusProblem>& corpus,
                                      const oracle::EnumerationOptions& opts = {});
CheckResult check_rgs_sq_error_step(const std::vector<CorpusProblem>& corpus,
                                    const oracle::EnumerationOptions& opts = {});
CheckResult check_rgs_fluctuation_step(const std::vector<CorpusProblem>& corpus,
                                       const oracle::EnumerationOptions& opts = {});
CheckResult check_regs_projection_step(const std::vector<CorpusProblem>& corpus);
CheckResult check_regs_step_bound(const std::vector<CorpusProblem>& corpus,
                                  const oracle::EnumerationOptions& opts = {});
CheckResult check_residual_projection(const std::vector<CorpusProblem>& corpus);
CheckResult check_regs_image_projection(const std::vector<CorpusProblem>& corpus);

// --- Monte Carlo checks ----------------------------------------------------
// Seeded 20 x 10 Gaussian problems: one with a noisy right-hand side, one consistent.
linalg::LsqProblem mc_problem(std::uint64_t seed, bool consistent);

struct McSettings {
  std::size_t trials = 2000;
  std::vector<std::size_t> k_grid{10, 50, 100};
  std::vector<std::size_t> ells;  // empty = {1, r}
  std::uint64_t master_seed = 1;
};

CheckResult check_rgs_projection_mc(const linalg::LsqProblem& problem, const McSettings& s);
CheckResult check_regs_projection_mc(const linalg::LsqProblem& problem, const McSettings& s);
CheckResult check_regs_image_projection_mc(const linalg::LsqProblem& problem, const McSettings& s);
CheckResult check_rk_projection_mc(const linalg::LsqProblem& problem, const McSettings& s);
// Trial means at every k <= k_max against bound * slack.
CheckResult check_rgs_bound_mc(const linalg::LsqProblem& problem, std::size_t trials,
                               std::size_t k_max, double slack, std::uint64_t master_seed);
CheckResult check_regs_bound_mc(const linalg::LsqProblem& problem, std::size_t trials,
                                std::size_t k_max, double slack, std::uint64_t master_seed);

// The column update used when the negative control is switched on: half a step.
void corrupted_column_update(std::span<double> x, std::span<double> w,
                             std::span<const double> column, std::span<const double> b,
                             solvers::ColumnIndex j);

struct VerificationReport {
  VerifySettings settings;
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

VerificationReport run_verification(const VerifySettings& settings);
// Deterministic text (no timings), one line per check.
std::string format_report(const VerificationReport& report);

}  // namespace rgs::lab
