#include "rgs_lab/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <nlohmann/json.hpp>

namespace rgs::lab {

using nlohmann::json;

namespace {

void only_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown key \"" + key + "\"");
    }
  }
}

template <typename T>
T get(const json& obj, const char* key, std::string_view where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, std::string_view where) {
  if (!obj.contains(key)) return fallback;
  return get<T>(obj, key, where);
}

std::uint64_t get_u64(const json& obj, const char* key, std::uint64_t fallback, std::string_view where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(std::string(where) + "." + key + ": expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

testgen::MatrixSpec parse_matrix(const json& j) {
  only_keys(j, "matrix", {"kind", "m", "n", "seed", "shift", "perturb", "spectrum"});
  testgen::MatrixSpec spec;
  const auto kind_name = get<std::string>(j, "kind", "matrix");
  const auto kind = testgen::parse_matrix_kind(kind_name);
  if (!kind) throw ConfigError("matrix.kind: unknown kind \"" + kind_name + "\"");
  spec.kind = *kind;
  if (spec.kind == testgen::MatrixKind::PaperA1) spec = testgen::paper_a1_spec(0);
  if (spec.kind == testgen::MatrixKind::PaperA2) spec = testgen::paper_a2_spec(0);
  spec.m = get_u64(j, "m", spec.m, "matrix");
  spec.n = get_u64(j, "n", spec.n, "matrix");
  spec.seed = get_u64(j, "seed", 0, "matrix");
  spec.shift = get_or<double>(j, "shift", spec.shift, "matrix");
  spec.perturb = get_or<double>(j, "perturb", spec.perturb, "matrix");
  if (j.contains("spectrum")) spec.spectrum = get<std::vector<double>>(j, "spectrum", "matrix");
  if (spec.m == 0 || spec.n == 0) throw ConfigError("matrix: m and n must be positive");
  return spec;
}

QuantityRequest parse_quantity(const json& j) {
  only_keys(j, "quantities[]", {"quantity", "ell"});
  QuantityRequest q;
  const auto name = get<std::string>(j, "quantity", "quantities[]");
  const auto parsed = diagnostics::parse_quantity(name);
  if (!parsed) throw ConfigError("quantities[]: unknown quantity \"" + name + "\"");
  q.quantity = *parsed;
  if (j.contains("ell")) {
    const json& e = j.at("ell");
    if (e.is_string() && e.get<std::string>() == "r") {
      q.ell_is_rank = true;
    } else if (e.is_number_integer() && e.get<std::int64_t>() >= 1) {
      q.ell = e.get<std::size_t>();
    } else {
      throw ConfigError("quantities[].ell: expected a positive integer or \"r\"");
    }
  }
  if (diagnostics::needs_ell(q.quantity) && !q.ell && !q.ell_is_rank) {
    throw ConfigError("quantities[]: " + name + " needs ell");
  }
  if (!diagnostics::needs_ell(q.quantity) && (q.ell || q.ell_is_rank)) {
    throw ConfigError("quantities[]: " + name + " takes no ell");
  }
  return q;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(root, "config",
            {"experiment_id", "matrix", "problem_dir", "rhs", "solver", "quantities", "k_grid",
             "trials", "output_dir", "verify"});

  ExperimentConfig c;
  c.experiment_id = get_or<std::string>(root, "experiment_id", c.experiment_id, "config");
  if (c.experiment_id.empty() ||
      c.experiment_id.find_first_of(",\"\n\r") != std::string::npos) {
    throw ConfigError("experiment_id must be nonempty without commas, quotes or newlines");
  }
  if (root.contains("matrix")) {
    c.matrix = parse_matrix(root.at("matrix"));
    c.has_matrix = true;
  }
  if (root.contains("problem_dir")) {
    c.problem_dir = get<std::string>(root, "problem_dir", "config");
  }

  if (root.contains("rhs")) {
    const json& r = root.at("rhs");
    only_keys(r, "rhs", {"mode", "seed"});
    const auto name = get_or<std::string>(r, "mode", "consistent", "rhs");
    const auto mode = testgen::parse_rhs_mode(name);
    if (!mode) throw ConfigError("rhs.mode: unknown mode \"" + name + "\"");
    c.rhs_mode = *mode;
    c.rhs_seed = get_u64(r, "seed", 0, "rhs");
  }

  if (root.contains("solver")) {
    const json& s = root.at("solver");
    only_keys(s, "solver", {"method", "max_iters", "seed", "trace_every", "refresh_every"});
    const auto name = get_or<std::string>(s, "method", "rgs", "solver");
    const auto method = solvers::parse_method(name);
    if (!method) throw ConfigError("solver.method: unknown method \"" + name + "\"");
    c.solver.method = *method;
    c.solver.max_iters = get_u64(s, "max_iters", c.solver.max_iters, "solver");
    c.solver.master_seed = get_u64(s, "seed", 0, "solver");
    c.solver.trace_every = get_u64(s, "trace_every", c.solver.trace_every, "solver");
    c.solver.refresh_every = get_u64(s, "refresh_every", c.solver.refresh_every, "solver");
    if (c.solver.trace_every == 0) throw ConfigError("solver.trace_every must be positive");
    if (c.solver.refresh_every == 0) throw ConfigError("solver.refresh_every must be positive");
  }

  if (root.contains("quantities")) {
    const json& qs = root.at("quantities");
    if (!qs.is_array()) throw ConfigError("quantities: expected an array");
    for (const auto& q : qs) c.quantities.push_back(parse_quantity(q));
  }

  if (root.contains("k_grid")) {
    c.k_grid = get<std::vector<std::size_t>>(root, "k_grid", "config");
    if (c.k_grid.empty()) throw ConfigError("k_grid: must not be empty");
    for (std::size_t i = 1; i < c.k_grid.size(); ++i) {
      if (c.k_grid[i] <= c.k_grid[i - 1]) throw ConfigError("k_grid: must be strictly increasing");
    }
  }

  c.trials = get_u64(root, "trials", c.trials, "config");
  if (c.trials < 2) throw ConfigError("trials: need at least 2");
  c.output_dir = get_or<std::string>(root, "output_dir", ".", "config");

  if (root.contains("verify")) {
    const json& v = root.at("verify");
    only_keys(v, "verify", {"seed", "mc_trials", "corrupt_update_rule"});
    c.verify.seed = get_u64(v, "seed", c.verify.seed, "verify");
    c.verify.mc_trials = get_u64(v, "mc_trials", c.verify.mc_trials, "verify");
    c.verify.corrupt_update_rule = get_or<bool>(v, "corrupt_update_rule", false, "verify");
    if (c.verify.mc_trials < 2) throw ConfigError("verify.mc_trials: need at least 2");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::size_t> effective_k_grid(const ExperimentConfig& config) {
  if (!config.k_grid.empty()) return config.k_grid;
  std::vector<std::size_t> grid;
  const std::size_t step = config.solver.trace_every;
  for (std::size_t k = 0; k < config.solver.max_iters; k += step) grid.push_back(k);
  grid.push_back(config.solver.max_iters);
  return grid;
}

std::vector<diagnostics::QuantitySpec> resolve_quantities(const ExperimentConfig& config,
                                                          const linalg::LsqProblem& problem) {
  std::vector<diagnostics::QuantitySpec> out;
  for (const auto& q : config.quantities) {
    diagnostics::QuantitySpec spec{q.quantity, q.ell};
    if (q.ell_is_rank) {
      if (problem.rank() == 0) throw ConfigError("ell = r on a zero matrix");
      spec.ell = problem.rank();
    }
    if (spec.ell) {
      const std::size_t limit = q.quantity == diagnostics::Quantity::RightProjectionSigned
                                    ? problem.cols()
                                    : problem.rows();
      if (*spec.ell > limit) {
        throw ConfigError("ell " + std::to_string(*spec.ell) + " out of range for " +
                          std::string(diagnostics::to_string(q.quantity)));
      }
    }
    out.push_back(spec);
  }
  return out;
}

bool is_full_scale(const testgen::MatrixSpec& spec) {
  return spec.kind == testgen::MatrixKind::PaperA1 || spec.kind == testgen::MatrixKind::PaperA2;
}

}  // namespace rgs::lab
