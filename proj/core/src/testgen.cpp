#include "rgs/testgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rgs/errors.hpp"

namespace rgs::testgen {

using linalg::matvec;
using linalg::norm2;

namespace {

// Stream ids under the user seed, one per independent purpose.
constexpr std::uint64_t kMatrixStream = 0x4d41545249580001ull;
constexpr std::uint64_t kPlantedStream = 0x504c414e54000002ull;
constexpr std::uint64_t kNoiseStream = 0x4e4f495345000003ull;

DenseMatrix paper_core(std::size_t n, double shift, double perturb, sampling::RngStream& rng) {
  if (n < 2) throw ContractViolation("paper recipe needs a core of at least 2 x 2");
  DenseMatrix G = gaussian_matrix(n, n, rng);
  for (std::size_t i = 0; i < n; ++i) G(i, i) += shift;
  for (std::size_t j = 0; j < n; ++j) G(n - 1, j) = G(n - 2, j) + perturb;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = G.row(i);
    const double nrm = norm2(row);
    if (nrm == 0.0) throw ContractViolation("paper recipe produced a zero row");
    for (double& v : row) v /= nrm;
  }
  return G;
}

DenseMatrix scaled_paper(std::size_t m, std::size_t n, double shift, double perturb,
                         std::uint64_t seed) {
  sampling::RngStream rng(seed, kMatrixStream);
  const std::size_t core = std::min(m, n);
  const DenseMatrix G = paper_core(core, shift, perturb, rng);
  DenseMatrix A(m, n);
  for (std::size_t i = 0; i < core; ++i)
    for (std::size_t j = 0; j < core; ++j) A(i, j) = G(i, j);
  return A;
}

DenseMatrix explicit_spectrum(std::size_t m, std::size_t n, const std::vector<double>& spectrum,
                              std::uint64_t seed) {
  if (spectrum.size() > std::min(m, n)) {
    throw ContractViolation("explicit_spectrum: spectrum longer than min(m, n)");
  }
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (!(spectrum[i] >= 0.0) || (i > 0 && spectrum[i] > spectrum[i - 1])) {
      throw ContractViolation("explicit_spectrum: spectrum must be nonnegative and nonincreasing");
    }
  }
  sampling::RngStream rng(seed, kMatrixStream);
  const DenseMatrix U = random_orthogonal(m, rng);
  const DenseMatrix V = random_orthogonal(n, rng);
  DenseMatrix A(m, n);
  for (std::size_t l = 0; l < spectrum.size(); ++l) {
    const double s = spectrum[l];
    for (std::size_t i = 0; i < m; ++i) {
      const double us = U(i, l) * s;
      for (std::size_t j = 0; j < n; ++j) A(i, j) += us * V(j, l);
    }
  }
  return A;
}

void rescale_to(Vector& v, double target) {
  const double nrm = norm2(v);
  if (nrm == 0.0) throw ContractViolation("make_rhs: cannot rescale a zero perturbation");
  for (double& x : v) x *= target / nrm;
}

}  // namespace

std::string_view to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::Gaussian:
      return "gaussian";
    case MatrixKind::PaperA1:
      return "paper_a1";
    case MatrixKind::PaperA2:
      return "paper_a2";
    case MatrixKind::ScaledPaper:
      return "scaled_paper";
    case MatrixKind::ExplicitSpectrum:
      return "explicit_spectrum";
  }
  return "unknown";
}

std::optional<MatrixKind> parse_matrix_kind(std::string_view name) {
  for (MatrixKind k : {MatrixKind::Gaussian, MatrixKind::PaperA1, MatrixKind::PaperA2,
                       MatrixKind::ScaledPaper, MatrixKind::ExplicitSpectrum}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

MatrixSpec paper_a1_spec(std::uint64_t seed) {
  return {MatrixKind::PaperA1, 600, 500, seed, 100.0, 0.01, std::nullopt};
}

MatrixSpec paper_a2_spec(std::uint64_t seed) {
  return {MatrixKind::PaperA2, 500, 600, seed, 100.0, 0.01, std::nullopt};
}

MatrixSpec desk_scale_spec(std::uint64_t seed) {
  return {MatrixKind::ScaledPaper, 120, 100, seed, 20.0, 0.01, std::nullopt};
}

DenseMatrix build_matrix(const MatrixSpec& spec) {
  if (spec.m == 0 || spec.n == 0) throw ContractViolation("build_matrix: dimensions must be positive");
  if (spec.spectrum && spec.kind != MatrixKind::ExplicitSpectrum) {
    throw ContractViolation("build_matrix: spectrum only applies to explicit_spectrum");
  }
  switch (spec.kind) {
    case MatrixKind::Gaussian: {
      sampling::RngStream rng(spec.seed, kMatrixStream);
      return gaussian_matrix(spec.m, spec.n, rng);
    }
    case MatrixKind::PaperA1:
      if (spec.m != 600 || spec.n != 500) throw ContractViolation("paper_a1 is 600 x 500");
      return scaled_paper(600, 500, spec.shift, spec.perturb, spec.seed);
    case MatrixKind::PaperA2:
      if (spec.m != 500 || spec.n != 600) throw ContractViolation("paper_a2 is 500 x 600");
      return scaled_paper(500, 600, spec.shift, spec.perturb, spec.seed);
    case MatrixKind::ScaledPaper:
      return scaled_paper(spec.m, spec.n, spec.shift, spec.perturb, spec.seed);
    case MatrixKind::ExplicitSpectrum:
      if (!spec.spectrum) throw ContractViolation("explicit_spectrum needs a spectrum");
      return explicit_spectrum(spec.m, spec.n, *spec.spectrum, spec.seed);
  }
  throw ContractViolation("build_matrix: unknown kind");
}

DenseMatrix gaussian_matrix(std::size_t m, std::size_t n, sampling::RngStream& rng) {
  std::vector<double> entries(m * n);
  for (double& v : entries) v = rng.gaussian();
  return DenseMatrix(m, n, std::move(entries));
}

DenseMatrix random_orthogonal(std::size_t n, sampling::RngStream& rng) {
  const DenseMatrix G = gaussian_matrix(n, n, rng);
  std::vector<Vector> q;
  q.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector v = G.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& prev : q) {
        const double c = linalg::dot(prev, v);
        linalg::axpy(-c, prev, v);
      }
    }
    const double nrm = norm2(v);
    if (nrm < 1e-8) throw ContractViolation("random_orthogonal: rank-deficient Gaussian draw");
    for (double& x : v) x /= nrm;
    q.push_back(std::move(v));
  }
  DenseMatrix Q(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) Q(i, j) = q[j][i];
  return Q;
}

std::string_view to_string(RhsMode m) {
  switch (m) {
    case RhsMode::Consistent:
      return "consistent";
    case RhsMode::NullspaceInconsistent:
      return "nullspace_inconsistent";
    case RhsMode::GaussianInconsistent:
      return "gaussian_inconsistent";
  }
  return "unknown";
}

std::optional<RhsMode> parse_rhs_mode(std::string_view name) {
  for (RhsMode m : {RhsMode::Consistent, RhsMode::NullspaceInconsistent,
                    RhsMode::GaussianInconsistent}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

Rhs make_rhs(const DenseMatrix& A, std::uint64_t seed, RhsMode mode) {
  if (mode == RhsMode::NullspaceInconsistent) return make_rhs(A, linalg::svd(A), seed, mode);
  return make_rhs(A, linalg::SvdFactorization{}, seed, mode);
}

Rhs make_rhs(const DenseMatrix& A, const linalg::SvdFactorization& f, std::uint64_t seed,
             RhsMode mode) {
  Rhs out;
  sampling::RngStream planted(seed, kPlantedStream);
  out.x_planted.resize(A.cols());
  for (double& v : out.x_planted) v = planted.gaussian();
  out.b = matvec(A, out.x_planted);
  const double signal = norm2(out.b);

  if (mode == RhsMode::Consistent) return out;

  sampling::RngStream noise_rng(seed, kNoiseStream);
  Vector noise(A.rows());
  for (double& v : noise) v = noise_rng.gaussian();

  if (mode == RhsMode::NullspaceInconsistent) {
    if (f.U.rows() != A.rows()) throw ContractViolation("make_rhs: factorization does not match A");
    if (f.rank >= A.rows()) {
      throw ContractViolation("make_rhs: A has full row rank, null space of A^T is trivial");
    }
    // Project out the column space twice to push A^T z down to rounding level.
    for (int pass = 0; pass < 2; ++pass) {
      const Vector p = linalg::project_column_space(f, noise);
      noise = linalg::sub(noise, p);
    }
  }
  rescale_to(noise, 0.1 * (signal > 0.0 ? signal : 1.0));
  linalg::axpy(1.0, noise, out.b);
  return out;
}

}  // namespace rgs::testgen
