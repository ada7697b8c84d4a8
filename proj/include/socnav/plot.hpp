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

#ifndef SOCNAV_PLOT_HPP
#define SOCNAV_PLOT_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "socnav/metrics.hpp"

namespace socnav {

class PlotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PlotAxis { kHumans, kNoise };

struct PlotSelection {
  std::vector<std::string> metrics;  // empty = every metric in the report
  PlotAxis x_axis{PlotAxis::kHumans};
};

/// SVG line chart of one metric's group means against the x key, one
/// curve per combination of the remaining keys. Throws PlotError listing
/// the available metrics when `metric` is absent.
std::string render_plot(const BatchReport& report, const std::string& metric, PlotAxis x_axis);

/// Writes <dir>/<metric>.svg per selected metric and returns the paths.
/// Throws PlotError on an empty report or selection.
std::vector<std::filesystem::path> emit_plots(const BatchReport& report,
                                              const PlotSelection& selection,
                                              const std::filesystem::path& dir);

}  // namespace socnav

#endif  // SOCNAV_PLOT_HPP
