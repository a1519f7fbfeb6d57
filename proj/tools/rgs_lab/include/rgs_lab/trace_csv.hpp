#pragma once

// Long-format trace CSV, one row per (trial, k, quantity):
//
//   experiment_id,method,trial,k,quantity,ell,value,status
//
// status is ok, undefined (error vector vanished, value empty) or error
// (the trial failed, value empty). ell is empty for quantities without one.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rgs/diagnostics.hpp"

namespace rgs::lab {

inline constexpr std::string_view kTraceHeader =
    "experiment_id,method,trial,k,quantity,ell,value,status";

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TraceRow {
  std::string experiment_id;
  std::string method;
  std::size_t trial = 0;
  std::size_t k = 0;
  std::string quantity;
  std::optional<std::size_t> ell;
  std::optional<double> value;
  std::string status;
};

std::string format_trace_csv(const diagnostics::MonteCarloResult& result,
                             const std::string& experiment_id, solvers::Method method);

std::vector<TraceRow> parse_trace_csv(const std::string& text);

}  // namespace rgs::lab
