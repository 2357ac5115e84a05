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

#include "purcell/geometry/se2.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace purcell {
namespace geometry {

namespace {
constexpr double kSeriesThreshold = 1e-6;
}  // namespace

double WrapAngle(double angle) {
  constexpr double kPi = std::numbers::pi;
  double wrapped = std::remainder(angle, 2.0 * kPi);
  // remainder() returns [-pi, pi]; move -pi onto +pi.
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

GroupPose Compose(const GroupPose& a, const GroupPose& b) {
  const double c = std::cos(a.theta);
  const double s = std::sin(a.theta);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y,
          WrapAngle(a.theta + b.theta)};
}

GroupPose Inverse(const GroupPose& g) {
  const double c = std::cos(g.theta);
  const double s = std::sin(g.theta);
  return {-c * g.x - s * g.y, s * g.x - c * g.y, WrapAngle(-g.theta)};
}

GroupPose ExpTwist(const BodyVelocity& xi, double t) {
  const double vx = xi.xi_x * t;
  const double vy = xi.xi_y * t;
  const double w = xi.xi_theta * t;
  // V(w) = [[a, -b], [b, a]] with a = sin(w)/w, b = (1 - cos(w))/w.
  double a;
  double b;
  if (std::abs(w) < kSeriesThreshold) {
    a = 1.0 - w * w / 6.0;
    b = w / 2.0 - w * w * w / 24.0;
  } else {
    // 1 - cos(w) = 2 sin^2(w / 2) avoids cancellation for small w.
    const double h = std::sin(0.5 * w);
    a = std::sin(w) / w;
    b = 2.0 * h * h / w;
  }
  return {a * vx - b * vy, b * vx + a * vy, WrapAngle(w)};
}

Eigen::Vector3d WorldRate(const GroupPose& g, const BodyVelocity& xi) {
  const double c = std::cos(g.theta);
  const double s = std::sin(g.theta);
  return {c * xi.xi_x - s * xi.xi_y, s * xi.xi_x + c * xi.xi_y, xi.xi_theta};
}

BodyVelocity BodyRate(const GroupPose& g, const Eigen::Vector3d& world_rate) {
  const double c = std::cos(g.theta);
  const double s = std::sin(g.theta);
  return {c * world_rate(0) + s * world_rate(1),
          -s * world_rate(0) + c * world_rate(1), world_rate(2)};
}

double PoseDistance(const GroupPose& a, const GroupPose& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y),
                   std::abs(WrapAngle(a.theta - b.theta))});
}

}  // namespace geometry
}  // namespace purcell
