#pragma once

// Test matrices and right-hand sides.
//
// The "paper" recipe: G0 is an n x n standard Gaussian matrix, G1 = G0 + shift*I,
// the last row of G1 is replaced by the second-to-last row plus `perturb` in
// every entry, then every row is scaled to unit 2-norm. This yields a spectrum
// clustered around one with a single tiny singular value. A1 stacks zero rows
// below G1, A2 appends zero columns to its right. The perturbation is applied
// before normalization.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rgs/linalg.hpp"
#include "rgs/sampling.hpp"

namespace rgs::testgen {

using linalg::DenseMatrix;
using linalg::Vector;

enum class MatrixKind { Gaussian, PaperA1, PaperA2, ScaledPaper, ExplicitSpectrum };

std::string_view to_string(MatrixKind k);
std::optional<MatrixKind> parse_matrix_kind(std::string_view name);

struct MatrixSpec {
  MatrixKind kind = MatrixKind::Gaussian;
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double shift = 100.0;
  double perturb = 0.01;
  std::optional<std::vector<double>> spectrum;  // ExplicitSpectrum only
};

// Full-size A1 (600 x 500) and A2 (500 x 600).
MatrixSpec paper_a1_spec(std::uint64_t seed);
MatrixSpec paper_a2_spec(std::uint64_t seed);
// Same recipe at desk scale: 120 x 100 with a 100 x 100 core, shift 20.
MatrixSpec desk_scale_spec(std::uint64_t seed);

// ScaledPaper uses a min(m, n) square core and pads with |m - n| zero rows
// (m > n) or zero columns (n > m). Throws ContractViolation on invalid specs.
DenseMatrix build_matrix(const MatrixSpec& spec);

DenseMatrix gaussian_matrix(std::size_t m, std::size_t n, sampling::RngStream& rng);
// Haar-ish random orthogonal n x n matrix (Gram-Schmidt on a Gaussian matrix).
DenseMatrix random_orthogonal(std::size_t n, sampling::RngStream& rng);

enum class RhsMode { Consistent, NullspaceInconsistent, GaussianInconsistent };

std::string_view to_string(RhsMode m);
std::optional<RhsMode> parse_rhs_mode(std::string_view name);

struct Rhs {
  Vector b;
  Vector x_planted;
};

// consistent:             b = A x
// nullspace_inconsistent: b = A x + z, z = (I - U_r U_r^T) g rescaled to 0.1 ||A x||
// gaussian_inconsistent:  b = A x + g rescaled to 0.1 ||A x||
// x and g are standard Gaussian from the seed. Nullspace mode throws
// ContractViolation when A has full row rank (A^T has a trivial null space).
Rhs make_rhs(const DenseMatrix& A, std::uint64_t seed, RhsMode mode);
Rhs make_rhs(const DenseMatrix& A, const linalg::SvdFactorization& f, std::uint64_t seed,
             RhsMode mode);

}  // namespace rgs::testgen
