#include "rgs_lab/trace_csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "rgs_lab/problem_io.hpp"

namespace rgs::lab {

std::string format_trace_csv(const diagnostics::MonteCarloResult& result,
                             const std::string& experiment_id, solvers::Method method) {
  std::string out(kTraceHeader);
  out += '\n';
  const std::string prefix = experiment_id + "," + std::string(solvers::to_string(method)) + ",";
  for (std::size_t t = 0; t < result.trials.size(); ++t) {
    const auto& trial = result.trials[t];
    for (std::size_t g = 0; g < result.k_grid.size(); ++g) {
      for (std::size_t q = 0; q < result.quantities.size(); ++q) {
        const auto& spec = result.quantities[q];
        out += prefix;
        out += std::to_string(t) + "," + std::to_string(result.k_grid[g]) + ",";
        out += diagnostics::to_string(spec.quantity);
        out += ",";
        if (spec.ell) out += std::to_string(*spec.ell);
        out += ",";
        if (trial.failed) {
          out += ",error\n";
          continue;
        }
        const auto& v = trial.values[q][g];
        out += v ? format_double(*v) + ",ok\n" : ",undefined\n";
      }
    }
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::size_t parse_index(const std::string& s, std::size_t line, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw CsvError("line " + std::to_string(line) + ": bad " + what + " \"" + s + "\"");
  }
  return std::stoull(s);
}

}  // namespace

std::vector<TraceRow> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw CsvError("unexpected header \"" + line + "\"");

  std::vector<TraceRow> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 8) {
      throw CsvError("line " + std::to_string(n) + ": expected 8 fields, got " +
                     std::to_string(f.size()));
    }
    TraceRow r;
    r.experiment_id = f[0];
    r.method = f[1];
    r.trial = parse_index(f[2], n, "trial");
    r.k = parse_index(f[3], n, "k");
    r.quantity = f[4];
    if (!f[5].empty()) r.ell = parse_index(f[5], n, "ell");
    r.status = f[7];
    if (r.status == "ok") {
      errno = 0;
      char* end = nullptr;
      const double v = std::strtod(f[6].c_str(), &end);
      if (f[6].empty() || end != f[6].c_str() + f[6].size() || errno == ERANGE || !std::isfinite(v)) {
        throw CsvError("line " + std::to_string(n) + ": bad value \"" + f[6] + "\"");
      }
      r.value = v;
    } else if (r.status == "undefined" || r.status == "error") {
      if (!f[6].empty()) {
        throw CsvError("line " + std::to_string(n) + ": " + r.status + " row carries a value");
      }
    } else {
      throw CsvError("line " + std::to_string(n) + ": unknown status \"" + r.status + "\"");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace rgs::lab
