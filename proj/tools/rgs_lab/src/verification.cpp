#include "rgs_lab/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rgs/diagnostics.hpp"
#include "rgs/errors.hpp"
#include "rgs/sampling.hpp"
#include "rgs/testgen.hpp"

namespace rgs::lab {

using linalg::LsqProblem;
using linalg::Vector;
using linalg::matvec;
using linalg::norm2;
using linalg::sub;

namespace {

constexpr double kExactTol = 1e-10;
constexpr std::uint64_t kIterateStream = 0x4954455241544501ull;

struct Tally {
  CheckResult r;
  Tally(std::string name, std::string kind, double tol) {
    r.name = std::move(name);
    r.kind = std::move(kind);
    r.tolerance = tol;
  }
  void add(double dev) {
    ++r.cases;
    // NaN must fail, so compare the negation
    if (!(dev <= r.max_dev)) r.max_dev = std::isnan(dev) ? INFINITY : dev;
  }
  CheckResult done() {
    r.passed = r.cases > 0 && r.max_dev <= r.tolerance;
    return r;
  }
};

Vector gaussian_vector(std::size_t n, sampling::RngStream& rng) {
  Vector v(n);
  for (double& x : v) x = rng.gaussian();
  return v;
}

CorpusProblem make_entry(std::string name, linalg::DenseMatrix A, Vector b, std::uint64_t seed,
                         std::size_t iterates) {
  LsqProblem problem(std::move(A), std::move(b));
  sampling::RngStream rng(seed, kIterateStream);
  CorpusProblem c{std::move(name), std::move(problem), {}, {}};
  for (std::size_t t = 0; t < iterates; ++t) {
    c.x_iterates.push_back(gaussian_vector(c.problem.cols(), rng));
    c.z_iterates.push_back(
        linalg::project_row_space(c.problem.svd(), gaussian_vector(c.problem.cols(), rng)));
  }
  return c;
}

double image_error_norm(const LsqProblem& p, const Vector& x) {
  return norm2(sub(matvec(p.A(), x), p.Ax_star()));
}

CheckResult from_expectation(std::string name, const std::vector<diagnostics::ExpectationReport>& reports) {
  Tally t(std::move(name), "z", 4.0);
  bool all = true;
  for (const auto& rep : reports) {
    all = all && rep.passed;
    for (const auto& p : rep.points) {
      // tolerance = 4 SE + floor, so this is the deviation in units of SE
      t.add(std::abs(p.mean - p.predicted) / (p.tolerance / 4.0));
    }
  }
  CheckResult r = t.done();
  r.passed = all && r.cases > 0;
  return r;
}

std::vector<std::size_t> resolve_ells(const LsqProblem& p, const std::vector<std::size_t>& ells) {
  if (ells.empty()) return {1, p.rank()};
  return ells;
}

using Predict = std::function<double(std::size_t ell, std::size_t k)>;

CheckResult expectation_check(std::string name, const LsqProblem& problem, solvers::Method method,
                              diagnostics::Quantity quantity, const McSettings& s,
                              std::size_t trials, const Predict& predict) {
  solvers::SolverConfig cfg;
  cfg.method = method;
  cfg.master_seed = s.master_seed;
  std::vector<diagnostics::ExpectationReport> reports;
  for (std::size_t ell : resolve_ells(problem, s.ells)) {
    reports.push_back(diagnostics::check_expectation(
        problem, cfg, {quantity, ell}, s.k_grid, trials,
        [&](std::size_t k) { return predict(ell, k); }));
  }
  return from_expectation(std::move(name), reports);
}

CheckResult bound_check(std::string name, const LsqProblem& problem, solvers::Method method,
                        std::size_t trials, std::size_t k_max, double slack,
                        std::uint64_t master_seed,
                        const std::function<double(std::size_t)>& bound) {
  solvers::SolverConfig cfg;
  cfg.method = method;
  cfg.master_seed = master_seed;
  std::vector<std::size_t> grid(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) grid[k] = k;
  const auto s =
      diagnostics::monte_carlo(problem, cfg, {diagnostics::Quantity::SqError, std::nullopt}, grid, trials);
  Tally t(std::move(name), "ratio", slack);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double b = bound(grid[g]);
    t.add(b > 0.0 ? s.mean[g] / b : (s.mean[g] > 0.0 ? INFINITY : 0.0));
  }
  return t.done();
}

}  // namespace

std::vector<CorpusProblem> build_corpus(std::uint64_t seed, std::size_t iterates) {
  using testgen::MatrixKind;
  using testgen::RhsMode;
  struct Recipe {
    const char* name;
    testgen::MatrixSpec spec;
    RhsMode mode;
  };
  const std::vector<Recipe> recipes = {
      {"gaussian_12x8", {MatrixKind::Gaussian, 12, 8, seed + 1, 0, 0, std::nullopt},
       RhsMode::GaussianInconsistent},
      {"gaussian_10x6", {MatrixKind::Gaussian, 10, 6, seed + 2, 0, 0, std::nullopt},
       RhsMode::GaussianInconsistent},
      {"rank5_12x8",
       {MatrixKind::ExplicitSpectrum, 12, 8, seed + 3, 0, 0,
        std::vector<double>{3.0, 2.0, 1.5, 1.0, 0.5}},
       RhsMode::GaussianInconsistent},
      {"gaussian_6x8", {MatrixKind::Gaussian, 6, 8, seed + 4, 0, 0, std::nullopt},
       RhsMode::Consistent},
      {"padded_10x8", {MatrixKind::ScaledPaper, 10, 8, seed + 5, 3.0, 0.01, std::nullopt},
       RhsMode::NullspaceInconsistent},
  };
  std::vector<CorpusProblem> out;
  out.reserve(recipes.size());
  for (std::size_t i = 0; i < recipes.size(); ++i) {
    auto A = testgen::build_matrix(recipes[i].spec);
    auto b = testgen::make_rhs(A, seed + 100 + i, recipes[i].mode).b;
    out.push_back(make_entry(recipes[i].name, std::move(A), std::move(b), seed + 200 + i, iterates));
  }
  return out;
}

CheckResult check_rgs_projection_step(const std::vector<CorpusProblem>& corpus,
                                      const oracle::EnumerationOptions& opts) {
  Tally t("rgs_left_projection_step", "rel", kExactTol);
  for (const auto& c : corpus) {
    for (const auto& x : c.x_iterates) {
      const double scale = image_error_norm(c.problem, x);
      for (std::size_t ell = 1; ell <= c.problem.rank(); ++ell) {
        const double got = oracle::enum_rgs_projection_step(c.problem, x, ell, opts);
        const double want = oracle::rgs_projection_step(c.problem, x, ell);
        t.add(oracle::relative_deviation(got, want, scale));
      }
    }
  }
  return t.done();
}

CheckResult check_rgs_sq_error_step(const std::vector<CorpusProblem>& corpus,
                                    const oracle::EnumerationOptions& opts) {
  Tally t("rgs_sq_error_step", "rel", kExactTol);
  for (const auto& c : corpus) {
    for (const auto& x : c.x_iterates) {
      try {
        const double got = oracle::enum_rgs_sq_error_step(c.problem, x, opts);
        const double want = oracle::rgs_sq_error_step(c.problem, x);
        const double e = image_error_norm(c.problem, x);
        t.add(oracle::relative_deviation(got, want, e * e));
      } catch (const DegenerateInstance&) {
        ++t.r.skipped;
      }
    }
  }
  return t.done();
}

CheckResult check_rgs_fluctuation_step(const std::vector<CorpusProblem>& corpus,
                                       const oracle::EnumerationOptions& opts) {
  Tally t("rgs_fluctuation_step", "rel", kExactTol);
  for (const auto& c : corpus) {
    for (const auto& x : c.x_iterates) {
      try {
        const double got = oracle::enum_rgs_fluctuation_step(c.problem, x, opts);
        const double want = oracle::rgs_fluctuation_step(c.problem, x);
        t.add(oracle::relative_deviation(got, want, 1.0));
      } catch (const DegenerateInstance&) {
        ++t.r.skipped;
      }
    }
  }
  return t.done();
}

CheckResult check_regs_projection_step(const std::vector<CorpusProblem>& corpus) {
  Tally t("regs_right_projection_step", "rel", kExactTol);
  for (const auto& c : corpus) {
    const auto& p = c.problem;
    const double s1 = p.svd().value(1);
    for (std::size_t it = 0; it < c.x_iterates.size(); ++it) {
      const Vector& x_next = c.x_iterates[it];
      const Vector& z = c.z_iterates[it];
      const double scale =
          norm2(sub(z, p.x_star())) + image_error_norm(p, x_next) * s1 / p.frob_sq();
      for (std::size_t ell = 1; ell <= p.rank(); ++ell) {
        const double got = oracle::enum_regs_projection_step(p, x_next, z, ell);
        const double want = oracle::regs_projection_step(p, x_next, z, ell);
        t.add(oracle::relative_deviation(got, want, scale));
      }
    }
  }
  return t.done();
}

CheckResult check_regs_step_bound(const std::vector<CorpusProblem>& corpus,
                                  const oracle::EnumerationOptions& opts) {
  Tally t("regs_sq_error_step_bound", "rel", kExactTol);
  for (const auto& c : corpus) {
    for (std::size_t it = 0; it < c.x_iterates.size(); ++it) {
      const Vector& x = c.x_iterates[it];
      const Vector& z = c.z_iterates[it];
      const double got = oracle::enum_regs_sq_error_step(c.problem, x, z, opts);
      const double bound = oracle::bound_regs_step(c.problem, z, x, 1);
      // only an excess over the bound counts as deviation
      t.add(std::max(0.0, got - bound) / std::max(bound, 1e-300));
    }
  }
  return t.done();
}

CheckResult check_residual_projection(const std::vector<CorpusProblem>& corpus) {
  Tally t("rgs_residual_projection", "rel", kExactTol);
  for (const auto& c : corpus) {
    const auto& p = c.problem;
    for (const auto& x : c.x_iterates) {
      const Vector r0 = sub(p.b(), matvec(p.A(), x));
      const double scale = image_error_norm(p, x);
      for (std::size_t ell = 1; ell <= p.rank(); ++ell) {
        for (std::size_t k : {0, 1, 7}) {
          const double got = oracle::closed_form_rgs_residual_projection(p, r0, ell, k).value;
          const double want = -oracle::closed_form_rgs_projection(p, x, ell, k).value;
          t.add(oracle::relative_deviation(got, want, scale));
        }
      }
    }
  }
  return t.done();
}

CheckResult check_regs_image_projection(const std::vector<CorpusProblem>& corpus) {
  Tally t("regs_left_projection_closed_form", "rel", kExactTol);
  for (const auto& c : corpus) {
    const auto& p = c.problem;
    const double s1 = p.svd().value(1);
    for (std::size_t it = 0; it < c.x_iterates.size(); ++it) {
      const Vector& x = c.x_iterates[it];
      const Vector& z = c.z_iterates[it];
      for (std::size_t k : {0, 1, 7}) {
        const double scale = s1 * norm2(sub(z, p.x_star())) +
                             static_cast<double>(k) * s1 * s1 * s1 * image_error_norm(p, x) /
                                 p.frob_sq();
        for (std::size_t ell = 1; ell <= p.rank(); ++ell) {
          const double got = oracle::closed_form_regs_A_projection(p, x, z, ell, k).value;
          const double want =
              p.svd().value(ell) * oracle::closed_form_regs_projection(p, x, z, ell, k).value;
          t.add(oracle::relative_deviation(got, want, scale));
        }
      }
    }
  }
  return t.done();
}

LsqProblem mc_problem(std::uint64_t seed, bool consistent) {
  const testgen::MatrixSpec spec{testgen::MatrixKind::Gaussian, 20, 10, seed, 0, 0, std::nullopt};
  auto A = testgen::build_matrix(spec);
  auto b = testgen::make_rhs(A, seed + 1,
                             consistent ? testgen::RhsMode::Consistent
                                        : testgen::RhsMode::GaussianInconsistent)
               .b;
  return LsqProblem(std::move(A), std::move(b));
}

CheckResult check_rgs_projection_mc(const LsqProblem& problem, const McSettings& s) {
  const Vector x0(problem.cols(), 0.0);
  return expectation_check("rgs_left_projection_mc", problem, solvers::Method::RGS,
                           diagnostics::Quantity::ProjectionSigned, s, s.trials,
                           [&](std::size_t ell, std::size_t k) {
                             return oracle::closed_form_rgs_projection(problem, x0, ell, k).value;
                           });
}

CheckResult check_regs_projection_mc(const LsqProblem& problem, const McSettings& s) {
  const Vector zero(problem.cols(), 0.0);
  return expectation_check("regs_right_projection_mc", problem, solvers::Method::REGS,
                           diagnostics::Quantity::RightProjectionSigned, s, s.trials,
                           [&](std::size_t ell, std::size_t k) {
                             return oracle::closed_form_regs_projection(problem, zero, zero, ell, k)
                                 .value;
                           });
}

CheckResult check_regs_image_projection_mc(const LsqProblem& problem, const McSettings& s) {
  const Vector zero(problem.cols(), 0.0);
  return expectation_check("regs_left_projection_mc", problem, solvers::Method::REGS,
                           diagnostics::Quantity::ProjectionSigned, s, s.trials,
                           [&](std::size_t ell, std::size_t k) {
                             return oracle::closed_form_regs_A_projection(problem, zero, zero, ell, k)
                                 .value;
                           });
}

CheckResult check_rk_projection_mc(const LsqProblem& problem, const McSettings& s) {
  const Vector x0(problem.cols(), 0.0);
  return expectation_check("rk_right_projection_mc", problem, solvers::Method::RK,
                           diagnostics::Quantity::RightProjectionSigned, s, s.trials,
                           [&](std::size_t ell, std::size_t k) {
                             return oracle::closed_form_rk_projection(problem, x0, ell, k).value;
                           });
}

CheckResult check_rgs_bound_mc(const LsqProblem& problem, std::size_t trials, std::size_t k_max,
                               double slack, std::uint64_t master_seed) {
  const Vector x0(problem.cols(), 0.0);
  return bound_check("rgs_sq_error_bound_mc", problem, solvers::Method::RGS, trials, k_max, slack,
                     master_seed, [&](std::size_t k) { return oracle::bound_rgs(problem, x0, k); });
}

CheckResult check_regs_bound_mc(const LsqProblem& problem, std::size_t trials, std::size_t k_max,
                                double slack, std::uint64_t master_seed) {
  const Vector zero(problem.cols(), 0.0);
  return bound_check("regs_sq_error_bound_mc", problem, solvers::Method::REGS, trials, k_max,
                     slack, master_seed,
                     [&](std::size_t k) { return oracle::bound_regs(problem, zero, zero, k); });
}

void corrupted_column_update(std::span<double> x, std::span<double> w,
                             std::span<const double> column, std::span<const double> b,
                             solvers::ColumnIndex j) {
  double g = 0.0;
  double nrm = 0.0;
  for (std::size_t i = 0; i < column.size(); ++i) {
    g += column[i] * (w[i] - b[i]);
    nrm += column[i] * column[i];
  }
  if (nrm == 0.0) throw ContractViolation("corrupted_column_update: zero column");
  const double step = 0.5 * g / nrm;
  x[j.value] -= step;
  for (std::size_t i = 0; i < column.size(); ++i) w[i] -= step * column[i];
}

bool VerificationReport::all_passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerificationReport run_verification(const VerifySettings& settings) {
  VerificationReport rep;
  rep.settings = settings;
  oracle::EnumerationOptions opts;
  if (settings.corrupt_update_rule) opts.column_update = &corrupted_column_update;

  const auto corpus = build_corpus(settings.seed);
  rep.checks.push_back(check_rgs_projection_step(corpus, opts));
  rep.checks.push_back(check_rgs_sq_error_step(corpus, opts));
  rep.checks.push_back(check_rgs_fluctuation_step(corpus, opts));
  rep.checks.push_back(check_regs_projection_step(corpus));
  rep.checks.push_back(check_regs_step_bound(corpus, opts));
  rep.checks.push_back(check_residual_projection(corpus));
  rep.checks.push_back(check_regs_image_projection(corpus));

  const LsqProblem noisy = mc_problem(settings.seed, false);
  const LsqProblem consistent = mc_problem(settings.seed, true);
  McSettings mc;
  mc.trials = settings.mc_trials;
  mc.master_seed = settings.seed;
  rep.checks.push_back(check_rgs_projection_mc(noisy, mc));
  McSettings mc2 = mc;
  mc2.trials = 2 * settings.mc_trials;
  rep.checks.push_back(check_regs_projection_mc(noisy, mc2));
  rep.checks.push_back(check_regs_image_projection_mc(noisy, mc2));
  rep.checks.push_back(check_rk_projection_mc(consistent, mc));
  rep.checks.push_back(check_rgs_bound_mc(noisy, 200, 200, 1.5, settings.seed));
  rep.checks.push_back(check_regs_bound_mc(noisy, 200, 200, 1.5, settings.seed));
  return rep;
}

std::string format_report(const VerificationReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line,
                "rgs-lab verification report\nseed %llu, monte carlo trials %zu%s\n\n",
                static_cast<unsigned long long>(report.settings.seed), report.settings.mc_trials,
                report.settings.corrupt_update_rule ? ", corrupted column update" : "");
  out += line;
  std::snprintf(line, sizeof line, "%-34s %-5s %7s %7s %12s %10s  %s\n", "check", "kind", "cases",
                "skipped", "max_dev", "tolerance", "result");
  out += line;
  std::size_t passed = 0;
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "%-34s %-5s %7zu %7zu %12.3e %10.3g  %s\n", c.name.c_str(),
                  c.kind.c_str(), c.cases, c.skipped, c.max_dev, c.tolerance,
                  c.passed ? "PASS" : "FAIL");
    out += line;
    passed += c.passed ? 1 : 0;
  }
  std::snprintf(line, sizeof line, "\n%zu of %zu checks passed\n", passed, report.checks.size());
  out += line;
  return out;
}

}  // namespace rgs::lab
