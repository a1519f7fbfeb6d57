#include "rgs_lab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

namespace rgs::lab {

namespace {

using Series = std::vector<std::pair<double, double>>;  // (k, value)

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 78;
constexpr double kRight = 700;
constexpr double kTop = 40;
constexpr double kBottom = 390;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1, 2 or 5 times a power of ten, close to range / 5.
double nice_step(double range) {
  const double raw = range / 5.0;
  const double p = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / p;
  return (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0) * p;
}

std::vector<double> linear_ticks(double lo, double hi) {
  const double step = nice_step(hi - lo);
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

PlotResult render_plot(const std::vector<TraceRow>& rows, const PlotOptions& options) {
  std::set<std::size_t> ells;
  std::string experiment;
  std::string method;
  for (const auto& r : rows) {
    if (r.quantity != options.quantity || r.status != "ok") continue;
    if (options.ell && r.ell != options.ell) continue;
    if (r.ell) ells.insert(*r.ell);
    experiment = r.experiment_id;
    method = r.method;
  }
  if (!options.ell && ells.size() > 1) {
    throw CsvError("quantity " + options.quantity + " has several ell values; pick one with --ell");
  }

  PlotResult result;
  std::map<std::size_t, Series> per_trial;
  std::map<std::size_t, std::pair<double, std::size_t>> sums;
  for (const auto& r : rows) {
    if (r.quantity != options.quantity || r.status != "ok") continue;
    if (options.ell && r.ell != options.ell) continue;
    const double v = *r.value;
    if (options.mean) {
      auto& s = sums[r.k];
      s.first += v;
      s.second += 1;
      continue;
    }
    if (options.log_y && v <= 0.0) {
      ++result.dropped_nonpositive;
      continue;
    }
    per_trial[r.trial].emplace_back(static_cast<double>(r.k), v);
  }

  std::vector<Series> series;
  if (options.mean) {
    Series s;
    for (const auto& [k, acc] : sums) {
      const double v = acc.first / static_cast<double>(acc.second);
      if (options.log_y && v <= 0.0) {
        ++result.dropped_nonpositive;
        continue;
      }
      s.emplace_back(static_cast<double>(k), v);
    }
    if (!s.empty()) series.push_back(std::move(s));
  } else {
    for (auto& [_, s] : per_trial) {
      std::stable_sort(s.begin(), s.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      series.push_back(std::move(s));
    }
  }
  if (series.empty()) throw CsvError("no plottable rows for quantity " + options.quantity);

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (const auto& [k, v] : s) {
      const double y = options.log_y ? std::log10(v) : v;
      xmin = std::min(xmin, k);
      xmax = std::max(xmax, k);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
      ++result.points;
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (options.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax == ymin) ymax = ymin + 1.0;
  } else if (ymax == ymin) {
    const double pad = std::max(0.5, 0.5 * std::abs(ymin));
    ymin -= pad;
    ymax += pad;
  } else {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }

  auto px = [&](double k) { return kLeft + (k - xmin) / (xmax - xmin) * (kRight - kLeft); };
  auto py = [&](double y) { return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"720\" height=\"440\" "
         "viewBox=\"0 0 720 440\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt("%.0f", kWidth) + "\" height=\"" +
         fmt("%.0f", kHeight) + "\" fill=\"white\"/>\n";

  std::string title = options.quantity;
  if (options.ell) {
    title += " (ell " + std::to_string(*options.ell) + ")";
  } else if (!ells.empty()) {
    title += " (ell " + std::to_string(*ells.begin()) + ")";
  }
  title += " - " + experiment + ", " + method + (options.mean ? ", trial mean" : "");
  svg += "<text x=\"389\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">" +
         escape(title) + "</text>\n";

  // axes
  svg += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" +
         fmt("%.2f", kRight - kLeft) + "\" height=\"" + fmt("%.2f", kBottom - kTop) + "\"/>\n";
  svg += "</g>\n";

  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (double t : linear_ticks(xmin, xmax)) {
    const double x = px(t);
    svg += "<line x1=\"" + fmt("%.2f", x) + "\" y1=\"" + fmt("%.2f", kBottom) + "\" x2=\"" +
           fmt("%.2f", x) + "\" y2=\"" + fmt("%.2f", kBottom + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", kBottom + 18) +
           "\" text-anchor=\"middle\">" + fmt("%g", t) + "</text>\n";
  }
  std::vector<double> yticks;
  if (options.log_y) {
    const double decades = ymax - ymin;
    const double step = std::max(1.0, std::ceil(decades / 10.0));
    for (double d = ymin; d <= ymax + 1e-9; d += step) yticks.push_back(d);
  } else {
    yticks = linear_ticks(ymin, ymax);
  }
  for (double t : yticks) {
    const double y = py(t);
    const std::string label = options.log_y ? "1e" + fmt("%.0f", t) : fmt("%g", t);
    svg += "<line x1=\"" + fmt("%.2f", kLeft - 5) + "\" y1=\"" + fmt("%.2f", y) + "\" x2=\"" +
           fmt("%.2f", kLeft) + "\" y2=\"" + fmt("%.2f", y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", kLeft - 8) + "\" y=\"" + fmt("%.2f", y + 4) +
           "\" text-anchor=\"end\">" + label + "</text>\n";
  }
  svg += "<text x=\"389\" y=\"426\" text-anchor=\"middle\">k</text>\n";
  svg += "</g>\n";

  svg += "<g fill=\"none\" stroke-width=\"1.2\">\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    svg += "<polyline stroke=\"";
    svg += kPalette[s % std::size(kPalette)];
    svg += "\" points=\"";
    for (std::size_t p = 0; p < series[s].size(); ++p) {
      const auto& [k, v] = series[s][p];
      if (p) svg += ' ';
      svg += fmt("%.2f", px(k)) + "," + fmt("%.2f", py(options.log_y ? std::log10(v) : v));
    }
    svg += "\"/>\n";
  }
  svg += "</g>\n</svg>\n";

  result.series = series.size();
  result.svg = std::move(svg);
  return result;
}

}  // namespace rgs::lab
