#pragma once

// Plain-text matrix files:
//
//   <rows> <cols>
//   a11 a12 ... a1n
//   ...
//
// Entries are written with "%.17g", which round-trips every double exactly,
// so a written-then-read matrix compares equal and reruns are byte-identical.
// Vectors are stored as one-column matrices.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "rgs/linalg.hpp"
#include "rgs_lab/config.hpp"

namespace rgs::lab {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double v);

void write_matrix(const std::filesystem::path& path, const linalg::DenseMatrix& A);
linalg::DenseMatrix read_matrix(const std::filesystem::path& path);
void write_vector(const std::filesystem::path& path, const linalg::Vector& v);
linalg::Vector read_vector(const std::filesystem::path& path);

// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

// FNV-1a 64 over the "%.17g" text of the entries, one per line; hex string.
std::string checksum(const linalg::Vector& v);

// Problem named by a config: either built from its matrix and rhs settings,
// or loaded from problem_dir (matrix.txt, rhs.txt as written by gen).
struct LoadedProblem {
  linalg::DenseMatrix A;
  linalg::Vector b;
};
LoadedProblem load_problem(const ExperimentConfig& config, bool allow_full);

}  // namespace rgs::lab
