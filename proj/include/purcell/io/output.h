// Copyright 2026 The Purcell Swimmer Toolkit Authors
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "purcell/sim/simulator.h"

namespace purcell {
namespace io {

inline constexpr const char* kTrajectoryHeader =
    "t,alpha1,alpha2,x,y,theta,xi_x,xi_y,xi_theta,segment";

/// One row per sample, 17 significant digits, LF line endings.
/// Throws ValidationError on an empty trajectory.
void WriteTrajectoryCsv(std::ostream& out, const sim::Trajectory& trajectory);
std::string TrajectoryCsv(const sim::Trajectory& trajectory);

/// Parses what WriteTrajectoryCsv produces. Throws ValidationError with the
/// line number on a bad header or row.
sim::Trajectory ReadTrajectoryCsv(std::istream& in);

enum class PlotKind {
  /// Equal-aspect x-y plane.
  kPathInPlane,
  /// Independent axes, x is time.
  kTimeSeries,
};

struct PlotSeries {
  std::string label;
  std::vector<Eigen::Vector2d> points;
  /// Draw a marker at every point (waypoints) instead of a line.
  bool markers{false};
};

struct PlotCircle {
  std::string label;
  Eigen::Vector2d center{0.0, 0.0};
  double radius{0.0};
};

struct Plot {
  PlotKind kind{PlotKind::kPathInPlane};
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::optional<PlotCircle> circle;
};

/// Self-contained SVG with axes, tick labels, one polyline (or marker set)
/// per series with distinct styling, an optional circle and a legend.
/// Output depends only on the plot. Throws ValidationError if there is no
/// point to draw.
std::string RenderSvg(const Plot& plot);

/// Writes `content` to `path` through a temporary file and a rename, so a
/// failed write leaves no partial file. Creates missing parent directories.
/// Throws std::runtime_error naming the path on failure.
void WriteFileAtomically(const std::filesystem::path& path,
                         const std::string& content);

}  // namespace io
}  // namespace purcell
