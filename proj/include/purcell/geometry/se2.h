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

#include <Eigen/Core>

namespace purcell {
namespace geometry {

/// Wraps an angle into (-pi, pi].
double WrapAngle(double angle);

/// Planar rigid-body pose (element of SE(2)). `theta` is kept in (-pi, pi]
/// by every operation in this header.
struct GroupPose {
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  static GroupPose Identity() { return {}; }

  Eigen::Vector3d AsVector() const { return {x, y, theta}; }
};

/// Body-frame velocity (element of se(2)).
struct BodyVelocity {
  double xi_x{0.0};
  double xi_y{0.0};
  double xi_theta{0.0};

  Eigen::Vector3d AsVector() const { return {xi_x, xi_y, xi_theta}; }
  static BodyVelocity FromVector(const Eigen::Vector3d& v) {
    return {v(0), v(1), v(2)};
  }
};

/// Group product a * b: the pose of frame b expressed through frame a.
GroupPose Compose(const GroupPose& a, const GroupPose& b);

GroupPose Inverse(const GroupPose& g);

/// Pose reached from the identity by flowing the constant body velocity `xi`
/// for time `t` (t >= 0). Uses the circular-arc closed form, falling back to
/// a second-order series when |xi_theta * t| < 1e-6.
GroupPose ExpTwist(const BodyVelocity& xi, double t);

/// Coordinate rates (xdot, ydot, thetadot) of g(t) when gdot = g * xi^.
Eigen::Vector3d WorldRate(const GroupPose& g, const BodyVelocity& xi);

/// Rotates a world-frame coordinate rate back into the body frame of `g`.
/// Inverse of WorldRate for a fixed pose.
BodyVelocity BodyRate(const GroupPose& g, const Eigen::Vector3d& world_rate);

/// Max of |dx|, |dy| and the wrapped |dtheta|.
double PoseDistance(const GroupPose& a, const GroupPose& b);

}  // namespace geometry
}  // namespace purcell
