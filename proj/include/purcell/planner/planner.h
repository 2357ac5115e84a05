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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "purcell/gait/schedule.h"
#include "purcell/sim/simulator.h"

namespace purcell {
namespace planner {

using geometry::GroupPose;

struct Maneuver {
  enum class Kind { kRotate, kTranslate };
  Kind kind{Kind::kRotate};
  /// Signed: radians for kRotate, meters (along the base-link axis) for
  /// kTranslate.
  double magnitude{0.0};

  static Maneuver Rotate(double angle) { return {Kind::kRotate, angle}; }
  static Maneuver Translate(double distance) {
    return {Kind::kTranslate, distance};
  }
};

/// One calibrated basis gait.
struct GaitCalibration {
  gait::GaitSpec spec;
  gait::ControlSchedule cycle;
  /// Net displacement of one cycle from the straight shape, in the initial
  /// body frame.
  GroupPose per_cycle;
  double cycle_duration{0.0};
  /// Principal component over the largest cross component. Rotations are
  /// converted to length with the link length 2L.
  double dominance_ratio{0.0};
};

/// Basis gaits indexed by lie::GroupDirection (x, y, theta).
struct CalibrationTable {
  std::array<GaitCalibration, 3> gaits;
  double characteristic_length{0.0};

  const GaitCalibration& operator[](lie::GroupDirection d) const {
    return gaits[static_cast<int>(d)];
  }
};

inline constexpr double kMinDominanceRatio = 2.0;

/// Simulates one cycle of each basis gait from the straight shape at the
/// identity pose. With `balanced`, a cycle is the synthesized schedule
/// followed by its reflection that keeps the gait's own direction and flips
/// both cross directions, so first-order leakage cancels.
/// Throws ValidationError if a gait's dominance ratio is below
/// kMinDominanceRatio or its schedule is not a closed shape loop.
CalibrationTable Calibrate(const model::SwimmerModel& model,
                           const std::array<gait::GaitSpec, 3>& specs,
                           const sim::IntegratorConfig& cfg = {},
                           bool balanced = true);

/// The synthesized cycle for `direction`, balanced as in Calibrate.
gait::ControlSchedule BasisCycle(const gait::GaitSpec& spec,
                                 lie::GroupDirection direction, bool balanced);

/// Solved bracket coefficients for `direction` at the straight shape, scaled
/// so that the largest magnitude is 1.
lie::BracketCoefficients NormalizedCoefficients(const model::SwimmerModel& model,
                                                lie::GroupDirection direction);

/// Ordered waypoints. Consecutive waypoints must be distinct.
struct WaypointPath {
  std::vector<Eigen::Vector2d> points;
};

/// Rotate then translate so that the base-link axis (either way along it)
/// points at `target`. The rotation is the representative of the bearing
/// modulo pi with |angle| <= pi / 2; the translation sign follows.
/// Throws ValidationError if target coincides with the start position.
std::vector<Maneuver> PlanLine(const GroupPose& start,
                               const Eigen::Vector2d& target);

struct PolygonPlan {
  /// Vertices v0, v1, ..., v_sides = v0, counterclockwise.
  WaypointPath path;
  std::vector<Maneuver> maneuvers;
  /// Pose at v0 whose heading becomes the first side's direction after one
  /// exterior turn.
  GroupPose start;
  double side_length{0.0};
  double exterior_turn{0.0};
};

/// Regular polygon inscribed in the circle (center, radius), starting at
/// center + (radius, 0). Each vertex gets [Rotate(2 pi / sides),
/// Translate(2 radius sin(pi / sides))]. Throws ValidationError unless
/// sides >= 3 and radius > 0.
PolygonPlan PlanPolygon(const Eigen::Vector2d& center, double radius,
                        int sides);

struct CompiledPlan {
  /// Residuals (maneuver minus executed cycles times per-cycle amount) are
  /// in schedule.maneuver_residuals.
  gait::ControlSchedule schedule;
  /// schedule.segments.size() after each maneuver.
  std::vector<std::size_t> maneuver_ends;
  std::vector<int> repetitions;
  std::vector<std::string> warnings;
};

/// Turns each maneuver into round(|m| / |per-cycle|) cycles of the theta
/// gait (Rotate) or the x gait (Translate), using the reversed gait for the
/// opposite sign. Maneuvers smaller than half a cycle emit no segments and a
/// warning.
CompiledPlan Compile(const std::vector<Maneuver>& maneuvers,
                     const CalibrationTable& calib);

/// Realized positions at the end of every `stride`-th maneuver (stride 2
/// picks the arrivals of rotate/translate pairs). The first point is the
/// trajectory start.
std::vector<Eigen::Vector2d> ArrivalPoints(const sim::Trajectory& trajectory,
                                           const CompiledPlan& plan,
                                           int stride = 2);

struct Circle {
  Eigen::Vector2d center{0.0, 0.0};
  double radius{0.0};
};

/// Least-squares circle through `points` (algebraic fit refined by
/// Gauss-Newton on the geometric residual). Needs at least 3 points that are
/// not collinear; throws NumericalError otherwise.
Circle FitCircle(const std::vector<Eigen::Vector2d>& points);

struct TrackingReport {
  std::vector<double> waypoint_errors;
  double max_error{0.0};
  double mean_error{0.0};
  /// Fitted to the realized points when there are at least 3 of them.
  std::optional<Circle> best_fit;
};

/// Compares planned waypoints with the realized points, index by index.
/// Throws ValidationError if the counts differ.
TrackingReport MakeTrackingReport(const WaypointPath& planned,
                                  const std::vector<Eigen::Vector2d>& realized,
                                  bool fit_circle);

}  // namespace planner
}  // namespace purcell
