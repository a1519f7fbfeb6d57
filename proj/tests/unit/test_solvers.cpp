#include <gtest/gtest.h>

#include <cmath>

#include "rgs/errors.hpp"
#include "rgs/oracle.hpp"
#include "rgs/solvers.hpp"
#include "rgs/testgen.hpp"
#include "support.hpp"

namespace rgs {
namespace {

using linalg::DenseMatrix;
using linalg::LsqProblem;
using linalg::Vector;
using solvers::ColumnIndex;
using solvers::RowIndex;

const DenseMatrix kDiag21 = DenseMatrix::from_rows({{2, 0}, {0, 1}});

TEST(RgsStep, IdentitySystem) {
  const auto A = DenseMatrix::identity(2);
  const auto s = solvers::rgs_step({{0, 0}, {0, 0}, 0}, A, Vector{1, 2}, ColumnIndex{0});
  EXPECT_EQ(s.x, (Vector{1, 0}));
  EXPECT_EQ(s.w, (Vector{1, 0}));
  EXPECT_EQ(s.k, 1u);
}

TEST(RgsStep, HandEvaluatedDiagonal) {
  const auto s = solvers::rgs_step({{1, 1}, {2, 1}, 0}, kDiag21, Vector{0, 0}, ColumnIndex{0});
  EXPECT_EQ(s.x, (Vector{0, 1}));
  EXPECT_EQ(s.w, (Vector{0, 1}));
}

TEST(RgsStep, FixedPointAtSolution) {
  sampling::RngStream rng(21, 0);
  const auto A = testing::random_matrix(7, 4, rng);
  const LsqProblem p(A, linalg::matvec(A, testing::random_vector(4, rng)));
  for (std::size_t j = 0; j < 4; ++j) {
    const auto s = solvers::rgs_step({p.x_star(), p.Ax_star(), 0}, A, p.b(), ColumnIndex{j});
    EXPECT_LE(testing::max_abs_diff(s.x, p.x_star()), 1e-13);
  }
}

TEST(RgsStep, ChangesExactlyOneCoordinate) {
  sampling::RngStream rng(22, 0);
  const auto A = testing::random_matrix(6, 5, rng);
  const auto b = testing::random_vector(6, rng);
  for (std::size_t j = 0; j < 5; ++j) {
    const auto x = testing::random_vector(5, rng);
    const auto s = solvers::rgs_step({x, linalg::matvec(A, x), 0}, A, b, ColumnIndex{j});
    for (std::size_t c = 0; c < 5; ++c) {
      if (c == j) {
        EXPECT_NE(s.x[c], x[c]);
      } else {
        EXPECT_EQ(s.x[c], x[c]);
      }
    }
    EXPECT_LE(testing::max_abs_diff(s.w, linalg::matvec(A, s.x)), 1e-12);
  }
}

TEST(RgsStep, ZeroColumnRejected) {
  const auto A = DenseMatrix::from_rows({{1, 0}, {1, 0}});
  EXPECT_THROW(solvers::rgs_step({{0, 0}, {0, 0}, 0}, A, Vector{1, 1}, ColumnIndex{1}),
               ContractViolation);
  EXPECT_THROW(solvers::rgs_step({{0, 0}, {0, 0}, 0}, A, Vector{1, 1}, ColumnIndex{2}),
               ContractViolation);
}

TEST(RkStep, Examples) {
  const auto A = DenseMatrix::identity(2);
  EXPECT_EQ(solvers::rk_step({0, 0}, A, Vector{1, 2}, RowIndex{0}), (Vector{1, 0}));
  EXPECT_EQ(solvers::rk_step({1, 2}, A, Vector{1, 2}, RowIndex{1}), (Vector{1, 2}));
  EXPECT_THROW(solvers::rk_step({0, 0}, DenseMatrix::from_rows({{0, 0}, {1, 1}}), Vector{1, 1},
                                RowIndex{0}),
               ContractViolation);
}

TEST(RkStep, RowEquationSatisfiedAfterProjection) {
  sampling::RngStream rng(23, 0);
  for (int t = 0; t < 50; ++t) {
    const auto A = testing::random_matrix(6, 4, rng);
    const auto target = testing::random_vector(4, rng);
    const auto z = testing::random_vector(4, rng);
    const std::size_t i = t % 6;
    const auto zp = solvers::rk_step(z, A, target, RowIndex{i});
    const double lhs = linalg::dot(A.row(i), zp);
    const double rhs = linalg::dot(A.row(i), target);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(RegsStep, IdentitySystem) {
  const auto s = solvers::regs_step({{0, 0}, {0, 0}, {0, 0}, 0}, DenseMatrix::identity(2),
                                    Vector{1, 2}, ColumnIndex{0}, RowIndex{0});
  EXPECT_EQ(s.x, (Vector{1, 0}));
  EXPECT_EQ(s.z, (Vector{1, 0}));
  EXPECT_EQ(s.k, 1u);
}

TEST(RegsStep, HandEvaluatedDiagonal) {
  // column 0: x_0 -= 2 * 2 / 4 -> x' = (0, 1); row 1 already agrees with x', so z is kept
  const auto s = solvers::regs_step({{1, 1}, {2, 1}, {1, 1}, 0}, kDiag21, Vector{0, 0},
                                    ColumnIndex{0}, RowIndex{1});
  EXPECT_EQ(s.x, (Vector{0, 1}));
  EXPECT_EQ(s.w, (Vector{0, 1}));
  EXPECT_EQ(s.z, (Vector{1, 1}));
  // row 0: z -= (2 - 0) / 4 * (2, 0) = (0, 1)
  const auto t = solvers::regs_step({{1, 1}, {2, 1}, {1, 1}, 0}, kDiag21, Vector{0, 0},
                                    ColumnIndex{0}, RowIndex{0});
  EXPECT_EQ(t.z, (Vector{0, 1}));
}

TEST(RegsStep, FixedPointAtSolution) {
  sampling::RngStream rng(24, 0);
  const auto A = testing::random_matrix(6, 4, rng);
  const LsqProblem p(A, linalg::matvec(A, testing::random_vector(4, rng)));
  const auto s = solvers::regs_step({p.x_star(), p.Ax_star(), p.x_star(), 0}, A, p.b(),
                                    ColumnIndex{2}, RowIndex{3});
  EXPECT_LE(testing::max_abs_diff(s.x, p.x_star()), 1e-13);
  EXPECT_LE(testing::max_abs_diff(s.z, p.x_star()), 1e-13);
}

TEST(Method, NamesRoundTrip) {
  for (auto m : {solvers::Method::RGS, solvers::Method::REGS, solvers::Method::RK}) {
    EXPECT_EQ(solvers::parse_method(solvers::to_string(m)), m);
  }
  EXPECT_FALSE(solvers::parse_method("gs").has_value());
}

LsqProblem small_problem(std::uint64_t seed, bool consistent) {
  sampling::RngStream rng(seed, 0);
  auto A = testing::random_matrix(20, 10, rng);
  Vector b = linalg::matvec(A, testing::random_vector(10, rng));
  if (!consistent) linalg::axpy(0.3, testing::random_vector(20, rng), b);
  return LsqProblem(std::move(A), std::move(b));
}

TEST(Run, ZeroIterationsReturnsInitialState) {
  const auto p = small_problem(1, false);
  solvers::SolverConfig cfg;
  cfg.max_iters = 0;
  Vector x0(10, 0.5);
  const auto trace = solvers::run(p, cfg, {}, {x0, std::nullopt});
  EXPECT_EQ(trace.x, x0);
  EXPECT_EQ(trace.traced, (std::vector<std::size_t>{0}));
}

TEST(Run, BitIdenticalForFixedSeed) {
  const auto p = small_problem(2, false);
  for (auto m : {solvers::Method::RGS, solvers::Method::REGS, solvers::Method::RK}) {
    solvers::SolverConfig cfg;
    cfg.method = m;
    cfg.master_seed = 77;
    cfg.max_iters = 500;
    const auto a = solvers::run(p, cfg);
    const auto b = solvers::run(p, cfg);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.z, b.z);
    cfg.master_seed = 78;
    EXPECT_NE(solvers::run(p, cfg).x, a.x);
  }
}

TEST(Run, TraceScheduleIncludesFinalStep) {
  const auto p = small_problem(3, false);
  solvers::SolverConfig cfg;
  cfg.max_iters = 25;
  cfg.trace_every = 10;
  std::vector<std::size_t> seen;
  const auto trace = solvers::run(p, cfg, [&](const solvers::IterateView& it) {
    seen.push_back(it.k);
    EXPECT_EQ(it.x.size(), 10u);
    EXPECT_EQ(it.w.size(), 20u);
    EXPECT_TRUE(it.z.empty());
  });
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 10, 20, 25}));
  EXPECT_EQ(trace.traced, seen);
}

TEST(Run, CachedImageStaysCoherentOverLongRuns) {
  const auto p = small_problem(4, false);
  const double fa = linalg::frob_norm(p.A());
  for (auto m : {solvers::Method::RGS, solvers::Method::REGS}) {
    solvers::SolverConfig cfg;
    cfg.method = m;
    cfg.max_iters = 100000;
    cfg.trace_every = 997;  // mostly between refreshes
    cfg.refresh_every = 1000;
    double worst = 0.0;
    solvers::run(p, cfg, [&](const solvers::IterateView& it) {
      const Vector d = linalg::sub(it.w, linalg::matvec(p.A(), it.x));
      worst = std::max(worst, linalg::norm2(d) / std::max(1.0, fa * linalg::norm2(it.x)));
    });
    EXPECT_LE(worst, 1e-8);
  }
}

TEST(Run, ConsistentSystemConvergesWithinBoundWithHighProbability) {
  const auto p = small_problem(5, true);
  const double sr = p.svd().smallest_nonzero();
  const auto K = static_cast<std::size_t>(
      std::ceil(10.0 * p.frob_sq() / (sr * sr) * std::log(1.0 / 1e-6)));
  solvers::SolverConfig cfg;
  cfg.max_iters = K;
  cfg.trace_every = K;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    cfg.master_seed = seed;
    const auto t = solvers::run(p, cfg);
    ok += linalg::norm2(linalg::sub(linalg::matvec(p.A(), t.x), p.Ax_star())) < 1e-6;
  }
  EXPECT_GE(ok, 99);
}

TEST(Run, MeanSquaredErrorBelowBoundAtFifty) {
  const auto p = small_problem(6, false);
  solvers::SolverConfig cfg;
  cfg.max_iters = 50;
  cfg.trace_every = 50;
  double sum = 0.0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const auto tr = solvers::run(p, cfg, {}, {}, t);
    sum += linalg::sq_norm(linalg::sub(linalg::matvec(p.A(), tr.x), p.Ax_star()));
  }
  const Vector x0(10, 0.0);
  EXPECT_LT(sum / 200, 1.5 * oracle::bound_rgs(p, x0, 50));
}

TEST(Run, RegsReachesMinimumNormSolutionWhereRgsDoesNot) {
  // rank 20 out of 30 x 40
  std::vector<double> spectrum;
  for (int i = 0; i < 20; ++i) spectrum.push_back(2.0 - 0.05 * i);
  const auto A = testgen::build_matrix(
      {testgen::MatrixKind::ExplicitSpectrum, 30, 40, 9, 0, 0, spectrum});
  const auto b = testgen::make_rhs(A, 10, testgen::RhsMode::GaussianInconsistent).b;
  const LsqProblem p(A, b);
  ASSERT_EQ(p.rank(), 20u);

  solvers::SolverConfig cfg;
  cfg.method = solvers::Method::REGS;
  cfg.max_iters = 5000;
  cfg.trace_every = 5000;
  double start = 0.0, end = 0.0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    solvers::run(p, cfg, [&](const solvers::IterateView& it) {
      const double e = linalg::norm2(linalg::sub(it.z, p.x_star()));
      (it.k == 0 ? start : end) += e / trials;
    }, {}, t);
  }
  EXPECT_LE(end, start / 10);

  sampling::RngStream rng(31, 0);
  const Vector x0 = testing::random_vector(40, rng);
  cfg.method = solvers::Method::RGS;
  const auto tr = solvers::run(p, cfg, {}, {x0, std::nullopt});
  const double image_gap = linalg::norm2(linalg::sub(linalg::matvec(A, tr.x), p.Ax_star()));
  const double x_gap = linalg::norm2(linalg::sub(tr.x, p.x_star()));
  EXPECT_LT(image_gap, 1e-6);
  EXPECT_GT(x_gap, 0.1);
}

TEST(Run, RejectsStartOutsideRowSpace) {
  const auto A = DenseMatrix::from_rows({{1, 0, 0}, {0, 1, 0}});
  const LsqProblem p(A, Vector{1, 1});
  solvers::SolverConfig cfg;
  cfg.method = solvers::Method::REGS;
  EXPECT_THROW(solvers::run(p, cfg, {}, {std::nullopt, Vector{0, 0, 1}}), ContractViolation);
  EXPECT_NO_THROW(solvers::run(p, cfg, {}, {std::nullopt, Vector{3, 4, 0}}));
}

TEST(Run, ZeroColumnsAreNeverSampled) {
  const auto A = DenseMatrix::from_rows({{1, 0, 2}, {3, 0, 1}});
  const LsqProblem p(A, Vector{1, 2});
  solvers::SolverConfig cfg;
  cfg.method = solvers::Method::REGS;
  cfg.max_iters = 2000;
  const auto t = solvers::run(p, cfg);
  EXPECT_EQ(t.x[1], 0.0);
  EXPECT_LE(linalg::norm2(linalg::sub(t.z, p.x_star())), 1e-10);
}

}  // namespace
}  // namespace rgs
