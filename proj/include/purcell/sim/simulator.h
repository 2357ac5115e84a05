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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "purcell/gait/schedule.h"
#include "purcell/model/swimmer.h"

namespace purcell {
namespace sim {

using geometry::BodyVelocity;
using geometry::GroupPose;
using model::Configuration;
using model::ShapePoint;

struct IntegratorConfig {
  /// Largest RK4 step (s).
  double max_step{1e-3};
  /// Every segment gets at least this many steps.
  int min_substeps{16};
  /// Keep every k-th step boundary (segment ends and the final state are
  /// always kept).
  int sample_stride{1};
};

/// Throws ValidationError unless max_step > 0, min_substeps >= 1 and
/// sample_stride >= 1.
void ValidateIntegratorConfig(const IntegratorConfig& cfg);

struct TrajectorySample {
  double time{0.0};
  ShapePoint shape;
  GroupPose pose;
  BodyVelocity body_velocity;
  /// Index of the segment that was active when the sample was taken.
  int segment{0};
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<std::string> warnings;
};

/// Body velocity produced by a unit rate on `channel` at `shape`: the group
/// part of the body-adapted control field.
using ControlFields =
    std::function<Eigen::Vector3d(int channel, const ShapePoint& shape)>;

ControlFields SwimmerFields(const model::SwimmerModel& model);

/// Integrates qdot = g1 u1 + g2 u2 under `schedule` starting at q0. Shape is
/// advanced exactly (it is linear in time within a segment); the pose is
/// integrated with classical RK4 on (x, y, theta) using
/// max(ceil(duration / max_step), min_substeps) steps per segment.
/// An empty schedule yields the initial sample and a warning.
Trajectory Simulate(const gait::ControlSchedule& schedule,
                    const Configuration& q0, const model::SwimmerModel& model,
                    const IntegratorConfig& cfg = {});

Trajectory Simulate(const gait::ControlSchedule& schedule,
                    const Configuration& q0, const ControlFields& fields,
                    const IntegratorConfig& cfg = {});

struct NetDisplacement {
  /// inverse(pose_0) * pose_final: the displacement in the initial body
  /// frame.
  GroupPose delta;
  /// Torus distance between first and last shape.
  double shape_closure{0.0};
};

/// Throws ValidationError on an empty trajectory.
NetDisplacement ComputeNetDisplacement(const Trajectory& trajectory);

struct ConvergenceRow {
  double parameter{0.0};
  double error{0.0};
};

struct ConvergenceResult {
  /// Least-squares slope of log(error) against log(parameter).
  double slope{0.0};
  std::vector<ConvergenceRow> table;
  /// False when the errors do not shrink along the ladder (sorted by
  /// decreasing parameter).
  bool monotone{true};
  std::string diagnostic;
};

/// Evaluates `error_at` on every ladder value and fits the log-log slope.
/// Needs at least 3 ladder points. Zero errors are reported with an infinite
/// slope left out of the fit; if every error is zero the slope is +inf.
ConvergenceResult ConvergenceProbe(
    std::span<const double> ladder,
    const std::function<double(double)>& error_at);

/// Group part (body frame at p) of the displacement of the unit square gait
/// [+g1, +g2, -g1, -g2] with segment duration eps, started at p.
Eigen::Vector3d SquareGaitDisplacement(const ControlFields& fields,
                                       double eps, const Configuration& p,
                                       int variant = 0,
                                       const IntegratorConfig& cfg = {});

}  // namespace sim
}  // namespace purcell
