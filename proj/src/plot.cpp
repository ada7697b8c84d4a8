// Copyright 2026 The socnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "socnav/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "socnav/log_io.hpp"

namespace socnav {
namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 600.0;  // plot area right edge; legend beyond
constexpr double kTop = 40.0;
constexpr double kBottom = 380.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string unit_of(const std::string& metric) {
  static const std::map<std::string, std::string> units{
      {"success_rate", "fraction"},   {"collision_rate", "fraction"},
      {"timeout_rate", "fraction"},   {"aborted_rate", "fraction"},
      {"spl", "fraction"},            {"discounted_return", "dimensionless"},
      {"time_to_goal", "s"},          {"avg_speed", "m/s"},
      {"path_length", "m"},           {"space_compliance", "fraction"},
      {"avg_acceleration", "m/s²"}, {"avg_jerk", "m/s³"},
      {"avg_min_dist", "m"}};
  const auto it = units.find(metric);
  return it == units.end() ? "" : it->second;
}

std::string xml_escape(const std::string& s) {
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

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::vector<double> ticks(double lo, double hi) {
  std::vector<double> out;
  for (int i = 0; i <= 4; ++i) out.push_back(lo + (hi - lo) * i / 4.0);
  return out;
}

std::string available(const BatchReport& report) {
  std::set<std::string> names;
  for (const ReportRow& r : report.rows) names.insert(r.metric);
  std::string list;
  for (const std::string& n : names) list += (list.empty() ? "" : ", ") + n;
  return list.empty() ? "(none)" : list;
}

}  // namespace

std::string render_plot(const BatchReport& report, const std::string& metric, PlotAxis x_axis) {
  std::vector<const ReportRow*> rows;
  for (const ReportRow& r : report.rows) {
    if (r.metric == metric) rows.push_back(&r);
  }
  if (rows.empty()) {
    throw PlotError("metric '" + metric + "' is not in the report; available: " +
                    available(report));
  }

  // Legend labels keep only the keys that vary across the curves.
  std::set<std::string> policies, models, scenarios;
  std::set<double> others;
  for (const ReportRow* r : rows) {
    policies.insert(r->key.policy);
    models.insert(r->key.model);
    scenarios.insert(r->key.scenario);
    others.insert(x_axis == PlotAxis::kHumans ? r->key.noise_pct : r->key.n_humans);
  }
  auto label_of = [&](const GroupKey& k) {
    std::vector<std::string> parts;
    if (policies.size() > 1 || (models.size() == 1 && scenarios.size() == 1)) parts.push_back(k.policy);
    if (models.size() > 1) parts.push_back(k.model);
    if (scenarios.size() > 1) parts.push_back(k.scenario);
    if (others.size() > 1) {
      parts.push_back(x_axis == PlotAxis::kHumans ? "noise " + num(k.noise_pct)
                                                  : "n=" + std::to_string(k.n_humans));
    }
    std::string s;
    for (const std::string& p : parts) s += (s.empty() ? "" : " / ") + p;
    return s;
  };

  std::map<std::string, std::vector<std::pair<double, double>>> curves;
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const ReportRow* r : rows) {
    const double x = x_axis == PlotAxis::kHumans ? r->key.n_humans : r->key.noise_pct;
    auto& curve = curves[label_of(r->key)];
    if (!std::isfinite(r->mean)) continue;
    curve.emplace_back(x, r->mean);
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, r->mean);
    y_hi = std::max(y_hi, r->mean);
  }
  if (!std::isfinite(x_lo)) {
    x_lo = 0.0;
    x_hi = 1.0;
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (x_hi - x_lo < 1e-12) {
    x_lo -= 1.0;
    x_hi += 1.0;
  }
  if (y_hi - y_lo < 1e-12) {
    const double pad = std::max(1e-3, std::abs(y_hi) * 0.1);
    y_lo -= pad;
    y_hi += pad;
  } else {
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;
  }
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kRight - kLeft); };
  auto sy = [&](double y) { return kBottom - (y - y_lo) / (y_hi - y_lo) * (kBottom - kTop); };

  const std::string unit = unit_of(metric);
  const std::string x_label =
      x_axis == PlotAxis::kHumans ? "number of humans" : "noise standard deviation (fraction of nominal)";

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(metric) << "</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";
  for (double t : ticks(x_lo, x_hi)) {
    svg << "<line x1=\"" << fixed(sx(t)) << "\" y1=\"" << kBottom << "\" x2=\"" << fixed(sx(t))
        << "\" y2=\"" << kBottom + 5 << "\" stroke=\"black\"/>"
        << "<text x=\"" << fixed(sx(t)) << "\" y=\"" << kBottom + 18
        << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  for (double t : ticks(y_lo, y_hi)) {
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fixed(sy(t)) << "\" x2=\"" << kRight
        << "\" y2=\"" << fixed(sy(t)) << "\" stroke=\"#dddddd\"/>"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed(sy(t) + 4)
        << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 40
      << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
  svg << "<text transform=\"translate(22," << (kTop + kBottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(metric)
      << (unit.empty() ? "" : " (" + xml_escape(unit) + ")") << "</text>\n";

  std::size_t index = 0;
  for (auto& [label, points] : curves) {
    std::sort(points.begin(), points.end());
    const char* color = kPalette[index % std::size(kPalette)];
    if (points.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (const auto& [x, y] : points) svg << fixed(sx(x)) << ',' << fixed(sy(y)) << ' ';
      svg << "\"/>\n";
    }
    for (const auto& [x, y] : points) {
      svg << "<circle cx=\"" << fixed(sx(x)) << "\" cy=\"" << fixed(sy(y)) << "\" r=\"3.5\" fill=\""
          << color << "\"/>\n";
    }
    const double ly = kTop + 16.0 * static_cast<double>(index);
    svg << "<line x1=\"" << kRight + 20 << "\" y1=\"" << ly << "\" x2=\"" << kRight + 40
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
        << "<text x=\"" << kRight + 46 << "\" y=\"" << ly + 4 << "\">"
        << xml_escape(label.empty() ? metric : label) << "</text>\n";
    ++index;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> emit_plots(const BatchReport& report,
                                              const PlotSelection& selection,
                                              const std::filesystem::path& dir) {
  if (report.rows.empty()) throw PlotError("report has no rows; nothing to plot");
  std::vector<std::string> metrics = selection.metrics;
  if (metrics.empty()) {
    for (const std::string& m : report_metrics()) {
      if (std::any_of(report.rows.begin(), report.rows.end(),
                      [&](const ReportRow& r) { return r.metric == m; })) {
        metrics.push_back(m);
      }
    }
  }
  if (metrics.empty()) throw PlotError("empty plot selection");
  // Render everything first so a bad metric name writes nothing.
  std::vector<std::string> svgs;
  for (const std::string& m : metrics) svgs.push_back(render_plot(report, m, selection.x_axis));
  std::vector<std::filesystem::path> written;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    const auto path = dir / (metrics[i] + ".svg");
    write_file_atomic(path, svgs[i]);
    written.push_back(path);
  }
  return written;
}

}  // namespace socnav
