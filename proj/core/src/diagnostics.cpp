#include "rgs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "rgs/errors.hpp"

namespace rgs::diagnostics {

using linalg::dot;
using linalg::matvec;
using linalg::norm2;
using linalg::sq_norm;
using linalg::sub;
using solvers::Method;

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::DirectionProjection:
      return "direction_projection";
    case Quantity::RayleighRatio:
      return "rayleigh_ratio";
    case Quantity::SqError:
      return "sq_error";
    case Quantity::ProjectionSigned:
      return "projection_signed";
    case Quantity::RightProjectionSigned:
      return "right_projection_signed";
  }
  return "unknown";
}

std::optional<Quantity> parse_quantity(std::string_view name) {
  for (Quantity q : {Quantity::DirectionProjection, Quantity::RayleighRatio, Quantity::SqError,
                     Quantity::ProjectionSigned, Quantity::RightProjectionSigned}) {
    if (to_string(q) == name) return q;
  }
  return std::nullopt;
}

bool needs_ell(Quantity q) {
  return q == Quantity::DirectionProjection || q == Quantity::ProjectionSigned ||
         q == Quantity::RightProjectionSigned;
}

std::optional<double> direction_projection(const LsqProblem& problem, std::span<const double> y,
                                           std::size_t ell) {
  if (ell == 0 || ell > problem.rows()) {
    throw ContractViolation("direction_projection: ell out of range");
  }
  const Vector e = sub(y, problem.Ax_star());
  const double nrm = norm2(e);
  if (nrm == 0.0) return std::nullopt;
  double c = 0.0;
  const auto& U = problem.svd().U;
  for (std::size_t i = 0; i < e.size(); ++i) c += U(i, ell - 1) * e[i];
  return std::min(1.0, std::abs(c) / nrm);
}

std::optional<double> rayleigh_ratio(const LsqProblem& problem, std::span<const double> x) {
  const Vector d = sub(x, problem.x_star());
  const double nrm = norm2(d);
  if (nrm == 0.0) return std::nullopt;
  return norm2(matvec(problem.A(), d)) / nrm;
}

std::optional<double> evaluate(const LsqProblem& problem, Method method,
                               const solvers::IterateView& it, const QuantitySpec& spec) {
  const std::span<const double> tracked = method == Method::REGS ? it.z : it.x;
  auto image = [&]() -> Vector {
    if (method == Method::RGS && !it.w.empty()) return Vector(it.w.begin(), it.w.end());
    return matvec(problem.A(), tracked);
  };
  auto ell = [&]() {
    if (!spec.ell) throw ContractViolation(std::string(to_string(spec.quantity)) + " needs ell");
    return *spec.ell;
  };

  switch (spec.quantity) {
    case Quantity::DirectionProjection:
      return direction_projection(problem, image(), ell());
    case Quantity::RayleighRatio:
      return rayleigh_ratio(problem, tracked);
    case Quantity::SqError:
      if (method == Method::RGS) return sq_norm(sub(image(), problem.Ax_star()));
      return sq_norm(sub(tracked, problem.x_star()));
    case Quantity::ProjectionSigned: {
      const std::size_t l = ell();
      if (l == 0 || l > problem.rows()) throw ContractViolation("projection_signed: bad ell");
      return dot(sub(image(), problem.Ax_star()), problem.svd().left(l));
    }
    case Quantity::RightProjectionSigned: {
      const std::size_t l = ell();
      if (l == 0 || l > problem.cols()) {
        throw ContractViolation("right_projection_signed: bad ell");
      }
      return dot(sub(tracked, problem.x_star()), problem.svd().right(l));
    }
  }
  return std::nullopt;
}

namespace {

TrialOutcome run_trial(const LsqProblem& problem, const solvers::SolverConfig& config,
                       std::span<const QuantitySpec> quantities,
                       std::span<const std::size_t> k_grid, const solvers::InitialState& initial,
                       std::size_t trial) {
  TrialOutcome out;
  out.values.assign(quantities.size(),
                    std::vector<std::optional<double>>(k_grid.size(), std::nullopt));
  try {
    auto hook = [&](const solvers::IterateView& it) {
      auto pos = std::lower_bound(k_grid.begin(), k_grid.end(), it.k);
      if (pos == k_grid.end() || *pos != it.k) return;
      const auto g = static_cast<std::size_t>(pos - k_grid.begin());
      for (std::size_t q = 0; q < quantities.size(); ++q) {
        out.values[q][g] = evaluate(problem, config.method, it, quantities[q]);
      }
    };
    solvers::run(problem, config, hook, initial, trial);
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
  }
  return out;
}

}  // namespace

RunSummary summarize(const MonteCarloResult& result, std::size_t quantity_index) {
  RunSummary s;
  s.spec = result.quantities.at(quantity_index);
  s.k_grid = result.k_grid;
  s.trials = result.trials.size();
  s.failed_trials = result.failed_trials;
  const std::size_t G = result.k_grid.size();
  s.mean.assign(G, std::nan(""));
  s.std_error.assign(G, std::nan(""));
  s.median.assign(G, std::nan(""));
  s.count.assign(G, 0);

  std::vector<double> column;
  for (std::size_t g = 0; g < G; ++g) {
    column.clear();
    for (const auto& t : result.trials) {
      if (t.failed) continue;
      const auto& v = t.values[quantity_index][g];
      if (v) column.push_back(*v);
    }
    const std::size_t n = column.size();
    s.count[g] = n;
    if (n == 0) continue;
    double sum = 0.0;
    for (double v : column) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : column) ss += (v - mean) * (v - mean);
    s.mean[g] = mean;
    s.std_error[g] =
        n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n))
              : 0.0;
    std::sort(column.begin(), column.end());
    s.median[g] = n % 2 == 1 ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);
  }
  return s;
}

MonteCarloResult monte_carlo(const LsqProblem& problem, const solvers::SolverConfig& config,
                             std::span<const QuantitySpec> quantities,
                             std::span<const std::size_t> k_grid, std::size_t trials,
                             const MonteCarloOptions& options) {
  if (trials < 2) throw ContractViolation("monte_carlo: need at least 2 trials");
  if (k_grid.empty()) throw ContractViolation("monte_carlo: empty k grid");
  if (!std::is_sorted(k_grid.begin(), k_grid.end()) ||
      std::adjacent_find(k_grid.begin(), k_grid.end()) != k_grid.end()) {
    throw ContractViolation("monte_carlo: k grid must be strictly increasing");
  }
  for (const auto& q : quantities) {
    if (needs_ell(q.quantity) && !q.ell) {
      throw ContractViolation(std::string(to_string(q.quantity)) + " needs ell");
    }
  }

  solvers::SolverConfig cfg = config;
  cfg.max_iters = k_grid.back();
  std::size_t step = 0;
  for (std::size_t k : k_grid) step = std::gcd(step, k);
  cfg.trace_every = step == 0 ? 1 : step;

  MonteCarloResult result;
  result.quantities.assign(quantities.begin(), quantities.end());
  result.k_grid.assign(k_grid.begin(), k_grid.end());
  result.trials.resize(trials);

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  auto worker = [&](unsigned tid) {
    for (std::size_t t = tid; t < trials; t += threads) {
      result.trials[t] = run_trial(problem, cfg, quantities, k_grid, options.initial, t);
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned tid = 0; tid < threads; ++tid) pool.emplace_back(worker, tid);
  }

  for (const auto& t : result.trials) result.failed_trials += t.failed ? 1 : 0;
  for (std::size_t q = 0; q < quantities.size(); ++q) result.summaries.push_back(summarize(result, q));
  return result;
}

RunSummary monte_carlo(const LsqProblem& problem, const solvers::SolverConfig& config,
                       QuantitySpec quantity, std::span<const std::size_t> k_grid,
                       std::size_t trials, const MonteCarloOptions& options) {
  const QuantitySpec qs[] = {quantity};
  return monte_carlo(problem, config, qs, k_grid, trials, options).summaries.front();
}

namespace {

ExpectationReport compare(const RunSummary& s, const std::function<double(std::size_t)>& predict,
                          double n_se) {
  ExpectationReport r;
  r.spec = s.spec;
  r.trials = s.trials;
  r.passed = true;
  for (std::size_t g = 0; g < s.k_grid.size(); ++g) {
    ExpectationPoint p;
    p.k = s.k_grid[g];
    p.predicted = predict(p.k);
    p.mean = s.mean[g];
    p.std_error = s.std_error[g];
    p.tolerance = n_se * p.std_error + 1e-12 * std::max(1.0, std::abs(p.predicted));
    p.passed = s.count[g] > 0 && std::abs(p.mean - p.predicted) <= p.tolerance;
    r.passed = r.passed && p.passed;
    r.points.push_back(p);
  }
  return r;
}

}  // namespace

ExpectationReport check_expectation(const LsqProblem& problem,
                                    const solvers::SolverConfig& config, QuantitySpec quantity,
                                    std::span<const std::size_t> k_grid, std::size_t trials,
                                    const std::function<double(std::size_t)>& predict,
                                    double n_se, const MonteCarloOptions& options) {
  ExpectationReport first =
      compare(monte_carlo(problem, config, quantity, k_grid, trials, options), predict, n_se);
  if (first.passed) return first;
  ExpectationReport second =
      compare(monte_carlo(problem, config, quantity, k_grid, 4 * trials, options), predict, n_se);
  second.rerun = true;
  return second;
}

DirectionPhenomenon assess_direction_phenomenon(const RunSummary& direction,
                                                const RunSummary& rayleigh, double sigma_r) {
  if (direction.k_grid != rayleigh.k_grid || direction.k_grid.empty()) {
    throw ContractViolation("assess_direction_phenomenon: summaries must share a k grid");
  }
  const auto& grid = direction.k_grid;
  const double k_max = static_cast<double>(grid.back());
  DirectionPhenomenon p;
  p.early_max = 0.0;
  p.late_min = 1.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double k = static_cast<double>(grid[g]);
    const double med = direction.median[g];
    if (k <= 0.1 * k_max) p.early_max = std::max(p.early_max, std::isnan(med) ? 1.0 : med);
    if (k >= 0.9 * k_max) p.late_min = std::min(p.late_min, std::isnan(med) ? 0.0 : med);
  }
  p.final_ratio = rayleigh.median.back() / sigma_r;
  p.worst_rise = 0.0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    p.worst_rise = std::max(p.worst_rise, rayleigh.median[g] / rayleigh.median[g - 1]);
  }
  p.early_small = p.early_max < 0.2;
  p.late_aligned = p.late_min > 0.99;
  p.ratio_near_sigma_r = p.final_ratio >= 0.5 && p.final_ratio <= 2.0;
  p.ratio_nonincreasing = p.worst_rise <= 1.05;
  return p;
}

}  // namespace rgs::diagnostics
