#pragma once

// Experiment configuration: one JSON document, unknown keys rejected.
//
// {
//   "experiment_id": "fig1",
//   "matrix": {"kind": "scaled_paper", "m": 120, "n": 100, "seed": 42,
//              "shift": 20, "perturb": 0.01, "spectrum": [..]},
//   "problem_dir": "out/gen",            // optional: load matrix.txt/rhs.txt instead
//   "rhs": {"mode": "nullspace_inconsistent", "seed": 7},
//   "solver": {"method": "rgs", "max_iters": 20000, "seed": 1,
//              "trace_every": 200, "refresh_every": 1000},
//   "quantities": [{"quantity": "direction_projection", "ell": "r"},
//                  {"quantity": "rayleigh_ratio"}],
//   "k_grid": [0, 100, 200],             // optional, default 0..max_iters by trace_every
//   "trials": 21,
//   "output_dir": "out/fig1",
//   "verify": {"seed": 42, "mc_trials": 2000, "corrupt_update_rule": false}
// }
//
// "ell" is a 1-based index or the string "r" (resolved to the rank once the
// problem is known).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgs/diagnostics.hpp"
#include "rgs/solvers.hpp"
#include "rgs/testgen.hpp"

namespace rgs::lab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuantityRequest {
  diagnostics::Quantity quantity = diagnostics::Quantity::SqError;
  std::optional<std::size_t> ell;  // explicit index
  bool ell_is_rank = false;        // "r"
};

struct VerifySettings {
  std::uint64_t seed = 42;
  std::size_t mc_trials = 2000;
  bool corrupt_update_rule = false;  // negative control
};

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  testgen::MatrixSpec matrix;
  bool has_matrix = false;
  std::optional<std::filesystem::path> problem_dir;
  testgen::RhsMode rhs_mode = testgen::RhsMode::Consistent;
  std::uint64_t rhs_seed = 0;
  solvers::SolverConfig solver;
  std::vector<QuantityRequest> quantities;
  std::vector<std::size_t> k_grid;  // empty = derived from the solver settings
  std::size_t trials = 10;
  std::filesystem::path output_dir = ".";
  VerifySettings verify;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// k grid actually used: the explicit one, or 0, trace_every, ..., max_iters.
std::vector<std::size_t> effective_k_grid(const ExperimentConfig& config);

// Resolves "r" and checks explicit indices against the problem.
std::vector<diagnostics::QuantitySpec> resolve_quantities(const ExperimentConfig& config,
                                                          const linalg::LsqProblem& problem);

bool is_full_scale(const testgen::MatrixSpec& spec);

}  // namespace rgs::lab
