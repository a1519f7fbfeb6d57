#pragma once

// Self-contained SVG 1.1 line charts of trace CSV data: k on the x axis,
// one polyline per trial or a single trial-mean polyline.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rgs_lab/trace_csv.hpp"

namespace rgs::lab {

struct PlotOptions {
  std::string quantity;
  std::optional<std::size_t> ell;  // required when the selection mixes several ells
  bool log_y = false;
  bool mean = false;
};

struct PlotResult {
  std::string svg;
  std::size_t series = 0;
  std::size_t points = 0;
  std::size_t dropped_nonpositive = 0;  // log scale only
};

// Uses rows with status ok. Throws CsvError when nothing matches.
PlotResult render_plot(const std::vector<TraceRow>& rows, const PlotOptions& options);

}  // namespace rgs::lab
