#include <gtest/gtest.h>

#include <cmath>

#include "rgs/diagnostics.hpp"
#include "rgs/errors.hpp"
#include "rgs/oracle.hpp"
#include "support.hpp"

namespace rgs {
namespace {

using diagnostics::Quantity;
using diagnostics::QuantitySpec;
using linalg::DenseMatrix;
using linalg::LsqProblem;
using linalg::Vector;

const LsqProblem kDiag(DenseMatrix::from_rows({{2, 0}, {0, 1}}), Vector{0, 0});

TEST(DirectionProjection, Examples) {
  EXPECT_NEAR(*diagnostics::direction_projection(kDiag, Vector{3, 4}, 1), 0.6, 1e-15);
  EXPECT_NEAR(*diagnostics::direction_projection(kDiag, Vector{3, 4}, 2), 0.8, 1e-15);
  EXPECT_FALSE(diagnostics::direction_projection(kDiag, Vector{0, 0}, 1).has_value());
  EXPECT_THROW(diagnostics::direction_projection(kDiag, Vector{1, 1}, 0), ContractViolation);
  EXPECT_THROW(diagnostics::direction_projection(kDiag, Vector{1, 1}, 3), ContractViolation);
}

TEST(DirectionProjection, SquaresSumToOneOverAllLeftVectors) {
  sampling::RngStream rng(60, 0);
  for (int t = 0; t < 20; ++t) {
    const auto A = t % 2 ? testing::random_low_rank(9, 6, 3, rng) : testing::random_matrix(9, 6, rng);
    const LsqProblem p(A, testing::random_vector(9, rng));
    const Vector y = testing::random_vector(9, rng);
    double sum = 0.0;
    for (std::size_t ell = 1; ell <= 9; ++ell) {
      const double c = *diagnostics::direction_projection(p, y, ell);
      sum += c * c;
    }
    EXPECT_NEAR(sum, 1.0, 1e-10);
  }
}

TEST(RayleighRatio, Examples) {
  EXPECT_NEAR(*diagnostics::rayleigh_ratio(kDiag, Vector{1, 0}), 2.0, 1e-15);
  EXPECT_NEAR(*diagnostics::rayleigh_ratio(kDiag, Vector{0, -3}), 1.0, 1e-15);
  EXPECT_FALSE(diagnostics::rayleigh_ratio(kDiag, Vector{0, 0}).has_value());
}

TEST(RayleighRatio, BetweenExtremeSingularValuesOnRowSpace) {
  sampling::RngStream rng(61, 0);
  const auto A = testing::random_low_rank(12, 9, 5, rng);
  const LsqProblem p(A, testing::random_vector(12, rng));
  for (int t = 0; t < 100; ++t) {
    const Vector d = linalg::project_row_space(p.svd(), testing::random_vector(9, rng));
    const double r = *diagnostics::rayleigh_ratio(p, linalg::add(p.x_star(), d));
    EXPECT_GE(r, p.svd().smallest_nonzero() * (1 - 1e-12));
    EXPECT_LE(r, p.svd().sigma[0] * (1 + 1e-12));
  }
}

TEST(Quantity, NamesRoundTrip) {
  for (auto q : {Quantity::DirectionProjection, Quantity::RayleighRatio, Quantity::SqError,
                 Quantity::ProjectionSigned, Quantity::RightProjectionSigned}) {
    EXPECT_EQ(diagnostics::parse_quantity(diagnostics::to_string(q)), q);
  }
  EXPECT_FALSE(diagnostics::parse_quantity("direction").has_value());
  EXPECT_TRUE(diagnostics::needs_ell(Quantity::DirectionProjection));
  EXPECT_FALSE(diagnostics::needs_ell(Quantity::RayleighRatio));
}

TEST(Evaluate, TracksTheRightIterate) {
  const Vector x{1, 1}, w{2, 1}, z{0, 2};
  const solvers::IterateView it{3, x, w, z};
  const QuantitySpec sq{Quantity::SqError, std::nullopt};
  EXPECT_DOUBLE_EQ(*diagnostics::evaluate(kDiag, solvers::Method::RGS, it, sq), 5.0);  // ||A x||^2
  EXPECT_DOUBLE_EQ(*diagnostics::evaluate(kDiag, solvers::Method::REGS, it, sq), 4.0);  // ||z||^2
  EXPECT_DOUBLE_EQ(*diagnostics::evaluate(kDiag, solvers::Method::RK, {3, x, {}, {}}, sq), 2.0);

  const QuantitySpec right{Quantity::RightProjectionSigned, 2};
  EXPECT_NEAR(std::abs(*diagnostics::evaluate(kDiag, solvers::Method::REGS, it, right)), 2.0, 1e-15);
  const QuantitySpec missing{Quantity::ProjectionSigned, std::nullopt};
  EXPECT_THROW(diagnostics::evaluate(kDiag, solvers::Method::RGS, it, missing), ContractViolation);
}

diagnostics::MonteCarloResult synthetic(std::vector<std::vector<std::optional<double>>> by_trial,
                                        std::vector<bool> failed) {
  diagnostics::MonteCarloResult r;
  r.quantities = {{Quantity::SqError, std::nullopt}};
  r.k_grid = {0};
  for (std::size_t t = 0; t < by_trial.size(); ++t) {
    diagnostics::TrialOutcome o;
    o.failed = failed[t];
    o.values = {by_trial[t]};
    r.trials.push_back(o);
    r.failed_trials += failed[t];
  }
  return r;
}

TEST(Summarize, SkipsUndefinedAndFailed) {
  const auto r = synthetic({{1.0}, {2.0}, {6.0}, {std::nullopt}, {100.0}},
                           {false, false, false, false, true});
  const auto s = diagnostics::summarize(r, 0);
  EXPECT_EQ(s.count[0], 3u);
  EXPECT_DOUBLE_EQ(s.mean[0], 3.0);
  EXPECT_DOUBLE_EQ(s.median[0], 2.0);
  EXPECT_NEAR(s.std_error[0], std::sqrt(7.0 / 3.0), 1e-15);  // sample var 7, n 3
  EXPECT_EQ(s.failed_trials, 1u);

  const auto even = diagnostics::summarize(synthetic({{1.0}, {4.0}}, {false, false}), 0);
  EXPECT_DOUBLE_EQ(even.median[0], 2.5);
  const auto none = diagnostics::summarize(synthetic({{std::nullopt}, {std::nullopt}}, {false, false}), 0);
  EXPECT_EQ(none.count[0], 0u);
  EXPECT_TRUE(std::isnan(none.mean[0]));
}

LsqProblem mc_problem(std::uint64_t seed) {
  sampling::RngStream rng(seed, 0);
  auto A = testing::random_matrix(15, 8, rng);
  auto b = testing::random_vector(15, rng);
  return LsqProblem(std::move(A), std::move(b));
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
  const auto p = mc_problem(70);
  const std::vector<QuantitySpec> qs{{Quantity::SqError, std::nullopt},
                                     {Quantity::DirectionProjection, 1},
                                     {Quantity::RayleighRatio, std::nullopt}};
  const std::vector<std::size_t> grid{0, 5, 20, 60};
  solvers::SolverConfig cfg;
  cfg.method = solvers::Method::REGS;
  cfg.master_seed = 9;
  diagnostics::MonteCarloOptions one, many;
  one.threads = 1;
  many.threads = 5;
  const auto a = diagnostics::monte_carlo(p, cfg, qs, grid, 37, one);
  const auto b = diagnostics::monte_carlo(p, cfg, qs, grid, 37, many);
  for (std::size_t t = 0; t < 37; ++t) EXPECT_EQ(a.trials[t].values, b.trials[t].values);
}

TEST(MonteCarlo, TrialMatchesAStandaloneRun) {
  const auto p = mc_problem(71);
  const std::vector<std::size_t> grid{0, 7, 21};
  solvers::SolverConfig cfg;
  cfg.master_seed = 5;
  const QuantitySpec q{Quantity::SqError, std::nullopt};
  const auto mc = diagnostics::monte_carlo(p, cfg, std::span(&q, 1), grid, 4);
  solvers::SolverConfig single = cfg;
  single.max_iters = 21;
  single.trace_every = 7;
  const auto tr = solvers::run(p, single, {}, {}, 3);
  const double direct = linalg::sq_norm(linalg::sub(linalg::matvec(p.A(), tr.x), p.Ax_star()));
  EXPECT_NEAR(*mc.trials[3].values[0][2], direct, 1e-10 * direct);
}

TEST(MonteCarlo, RejectsBadArguments) {
  const auto p = mc_problem(72);
  solvers::SolverConfig cfg;
  const QuantitySpec q{Quantity::SqError, std::nullopt};
  const std::vector<std::size_t> grid{0, 10};
  EXPECT_THROW(diagnostics::monte_carlo(p, cfg, q, grid, 1), ContractViolation);
  EXPECT_THROW(diagnostics::monte_carlo(p, cfg, q, std::vector<std::size_t>{10, 5}, 4),
               ContractViolation);
  EXPECT_THROW(diagnostics::monte_carlo(p, cfg, q, std::vector<std::size_t>{}, 4), ContractViolation);
  EXPECT_THROW(diagnostics::monte_carlo(p, cfg, {Quantity::ProjectionSigned, std::nullopt}, grid, 4),
               ContractViolation);
}

TEST(MonteCarlo, FailedTrialsAreRecorded) {
  sampling::RngStream rng(73, 0);
  const auto A = testing::random_low_rank(6, 8, 3, rng);
  const LsqProblem p(A, testing::random_vector(6, rng));
  solvers::SolverConfig cfg;
  cfg.method = solvers::Method::REGS;
  diagnostics::MonteCarloOptions opts;
  opts.initial.z0 = testing::random_vector(8, rng);  // not in the row space
  const auto r = diagnostics::monte_carlo(p, cfg, std::vector<QuantitySpec>{{Quantity::SqError, std::nullopt}},
                                          std::vector<std::size_t>{0, 10}, 3, opts);
  EXPECT_EQ(r.failed_trials, 3u);
  EXPECT_FALSE(r.trials[0].error.empty());
  EXPECT_EQ(r.summaries[0].count[1], 0u);
}

TEST(CheckExpectation, AcceptsTruthRejectsScaledPrediction) {
  const auto p = mc_problem(74);
  solvers::SolverConfig cfg;
  cfg.master_seed = 3;
  const Vector x0(8, 0.0);
  const std::vector<std::size_t> grid{0, 5, 15, 30};
  auto truth = [&](std::size_t k) { return oracle::closed_form_rgs_projection(p, x0, 1, k).value; };
  const auto good = diagnostics::check_expectation(p, cfg, {Quantity::ProjectionSigned, 1}, grid,
                                                   2000, truth);
  EXPECT_TRUE(good.passed);
  EXPECT_EQ(good.points.size(), 4u);

  auto wrong = [&](std::size_t k) { return 1.5 * truth(k); };
  const auto bad = diagnostics::check_expectation(p, cfg, {Quantity::ProjectionSigned, 1}, grid,
                                                  2000, wrong);
  EXPECT_FALSE(bad.passed);
  EXPECT_TRUE(bad.rerun);
  EXPECT_EQ(bad.trials, 8000u);
}

diagnostics::RunSummary series(std::vector<double> medians) {
  diagnostics::RunSummary s;
  for (std::size_t g = 0; g < medians.size(); ++g) s.k_grid.push_back(10 * g);
  s.median = std::move(medians);
  return s;
}

TEST(DirectionPhenomenon, ClassifiesSyntheticCurves) {
  // grid 0..100: first 10% is k in {0, 10}, last 10% is {90, 100}
  const auto dir = series({0.05, 0.1, 0.4, 0.6, 0.8, 0.9, 0.95, 0.98, 0.99, 0.995, 0.999});
  const auto ray = series({3.0, 2.0, 1.5, 1.2, 1.1, 1.05, 1.04, 1.03, 1.02, 1.01, 1.0});
  const auto ok = diagnostics::assess_direction_phenomenon(dir, ray, 1.0);
  EXPECT_DOUBLE_EQ(ok.early_max, 0.1);
  EXPECT_DOUBLE_EQ(ok.late_min, 0.995);
  EXPECT_DOUBLE_EQ(ok.final_ratio, 1.0);
  EXPECT_TRUE(ok.early_small && ok.late_aligned && ok.ratio_near_sigma_r && ok.ratio_nonincreasing);

  auto rising = ray;
  rising.median[5] = 1.3;
  const auto bad = diagnostics::assess_direction_phenomenon(dir, rising, 0.4);
  EXPECT_FALSE(bad.ratio_nonincreasing);
  EXPECT_FALSE(bad.ratio_near_sigma_r);  // 1.0 / 0.4 = 2.5

  auto late_nan = dir;
  late_nan.median.back() = std::nan("");
  EXPECT_FALSE(diagnostics::assess_direction_phenomenon(late_nan, ray, 1.0).late_aligned);

  EXPECT_THROW(diagnostics::assess_direction_phenomenon(dir, series({1.0}), 1.0),
               ContractViolation);
}

}  // namespace
}  // namespace rgs
