#include <benchmark/benchmark.h>

#include "rgs/diagnostics.hpp"
#include "rgs/linalg.hpp"
#include "rgs/sampling.hpp"
#include "rgs/solvers.hpp"
#include "rgs/testgen.hpp"

namespace {

using namespace rgs;

linalg::LsqProblem problem(std::size_t m, std::size_t n) {
  const auto A = testgen::build_matrix({testgen::MatrixKind::ScaledPaper, m, n, 42, 20.0, 0.01,
                                        std::nullopt});
  const auto b = testgen::make_rhs(A, 7, testgen::RhsMode::GaussianInconsistent).b;
  return linalg::LsqProblem(A, b);
}

// iterations per second of a whole run, no tracing
void BM_Run(benchmark::State& state, solvers::Method method) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = problem(n + n / 5, n);
  solvers::SolverConfig cfg;
  cfg.method = method;
  cfg.max_iters = 10000;
  cfg.trace_every = cfg.max_iters;
  for (auto _ : state) benchmark::DoNotOptimize(solvers::run(p, cfg).x.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.max_iters));
}
BENCHMARK_CAPTURE(BM_Run, rgs, solvers::Method::RGS)->Arg(100)->Arg(500);
BENCHMARK_CAPTURE(BM_Run, regs, solvers::Method::REGS)->Arg(100)->Arg(500);
BENCHMARK_CAPTURE(BM_Run, rk, solvers::Method::RK)->Arg(100)->Arg(500);

void BM_Svd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  sampling::RngStream rng(1, 0);
  const auto A = testgen::gaussian_matrix(n + n / 5, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::svd(A).sigma.data());
}
BENCHMARK(BM_Svd)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Sample(benchmark::State& state) {
  std::vector<double> w(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 + static_cast<double>(i % 7);
  const auto d = sampling::build_distribution(w);
  sampling::RngStream rng(3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(d.sample(rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Sample)->Arg(100)->Arg(600)->Arg(10000);

void BM_Philox(benchmark::State& state) {
  sampling::RngStream rng(5, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next_u64());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Philox);

// Monte Carlo harness overhead: 20 trials, direction + rayleigh every 100 steps
void BM_MonteCarlo(benchmark::State& state) {
  const auto p = problem(120, 100);
  const std::vector<diagnostics::QuantitySpec> qs{
      {diagnostics::Quantity::DirectionProjection, p.rank()},
      {diagnostics::Quantity::RayleighRatio, std::nullopt}};
  std::vector<std::size_t> grid;
  for (std::size_t k = 0; k <= 5000; k += 100) grid.push_back(k);
  solvers::SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(diagnostics::monte_carlo(p, cfg, qs, grid, 20).failed_trials);
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
