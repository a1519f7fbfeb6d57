#include "rgs_lab/problem_io.hpp"

#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rgs::lab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void write_matrix(const std::filesystem::path& path, const linalg::DenseMatrix& A) {
  std::string text = std::to_string(A.rows()) + " " + std::to_string(A.cols()) + "\n";
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (j) text += ' ';
      text += format_double(A(i, j));
    }
    text += '\n';
  }
  write_text(path, text);
}

linalg::DenseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!(in >> rows >> cols) || rows == 0 || cols == 0) {
    throw IoError(path.string() + ": bad dimension header");
  }
  std::vector<double> entries;
  entries.reserve(rows * cols);
  std::string token;
  while (in >> token) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || errno == ERANGE) {
      throw IoError(path.string() + ": bad entry \"" + token + "\"");
    }
    entries.push_back(v);
  }
  if (entries.size() != rows * cols) {
    throw IoError(path.string() + ": expected " + std::to_string(rows * cols) + " entries, found " +
                  std::to_string(entries.size()));
  }
  return linalg::DenseMatrix(rows, cols, std::move(entries));
}

void write_vector(const std::filesystem::path& path, const linalg::Vector& v) {
  write_matrix(path, linalg::DenseMatrix(v.size(), 1, v));
}

linalg::Vector read_vector(const std::filesystem::path& path) {
  const auto M = read_matrix(path);
  if (M.cols() != 1) throw IoError(path.string() + ": expected a single column");
  return {M.entries().begin(), M.entries().end()};
}

std::string checksum(const linalg::Vector& v) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (double x : v) {
    for (char c : format_double(x) + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

LoadedProblem load_problem(const ExperimentConfig& config, bool allow_full) {
  if (config.problem_dir) {
    LoadedProblem p{read_matrix(*config.problem_dir / "matrix.txt"),
                    read_vector(*config.problem_dir / "rhs.txt")};
    if (p.b.size() != p.A.rows()) throw IoError("rhs.txt length does not match matrix.txt");
    return p;
  }
  if (!config.has_matrix) throw ConfigError("config needs either matrix or problem_dir");
  if (is_full_scale(config.matrix) && !allow_full) {
    throw ConfigError(std::string(testgen::to_string(config.matrix.kind)) +
                      " is full scale; pass --full to build it");
  }
  LoadedProblem p;
  p.A = testgen::build_matrix(config.matrix);
  p.b = testgen::make_rhs(p.A, config.rhs_seed, config.rhs_mode).b;
  return p;
}

}  // namespace rgs::lab
