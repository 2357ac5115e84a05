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

#include "purcell/acceptance/oracle.h"

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace purcell {
namespace acceptance {

namespace {

struct Rod {
  // The rod runs from `anchor` along the unit direction at angle `phi` for
  // length `length`; `phi_rate_joint` is its angular rate relative to the
  // base link.
  Eigen::Vector2d anchor;
  double phi;
  double length;
  double phi_rate_joint;
};

Eigen::Vector2d Perp(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

}  // namespace

Eigen::Vector3d OracleBodyVelocity(const model::SwimmerParams& params,
                                   const model::ShapePoint& shape,
                                   const model::ShapeVelocity& rate,
                                   int points_per_link) {
  const double L = params.half_length;
  // Outer rods hang off the joints at (-L, 0) and (L, 0). The left rod
  // points away from the body at angle pi - alpha1, the right one at alpha2.
  const std::array<Rod, 3> rods = {{
      {{-L, 0.0}, std::numbers::pi - shape.alpha1, 2.0 * L, -rate.alpha1_dot},
      {{-L, 0.0}, 0.0, 2.0 * L, 0.0},
      {{L, 0.0}, shape.alpha2, 2.0 * L, rate.alpha2_dot},
  }};

  // Velocity of a point p on a rod: v = V + w_b x anchor + (w_b + w_j) x
  // (p - anchor), with (V, w_b) the body velocity and w_j the joint rate.
  // Force density f = -K v is affine in the body velocity:
  // accumulate M xi + c = 0 for (Fx, Fy, torque about the origin).
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const Rod& rod : rods) {
    const Eigen::Vector2d dir(std::cos(rod.phi), std::sin(rod.phi));
    const Eigen::Matrix2d K = params.k_long * dir * dir.transpose() +
                              params.k_lat * Perp(dir) * Perp(dir).transpose();
    const double ds = rod.length / points_per_link;
    for (int i = 0; i <= points_per_link; ++i) {
      const double weight = (i == 0 || i == points_per_link) ? 0.5 * ds : ds;
      const Eigen::Vector2d arm = i * ds * dir;
      const Eigen::Vector2d p = rod.anchor + arm;
      // Columns: d v / d (xi_x, xi_y, xi_theta); the body rotation acts on
      // the full position p.
      Eigen::Matrix<double, 2, 3> B;
      B.col(0) << 1.0, 0.0;
      B.col(1) << 0.0, 1.0;
      B.col(2) = Perp(p);
      const Eigen::Vector2d v0 = rod.phi_rate_joint * Perp(arm);
      Eigen::Matrix<double, 3, 2> to_wrench;
      to_wrench.row(0) << 1.0, 0.0;
      to_wrench.row(1) << 0.0, 1.0;
      to_wrench.row(2) << -p.y(), p.x();
      M -= weight * to_wrench * K * B;
      c -= weight * to_wrench * K * v0;
    }
  }
  return M.fullPivLu().solve(-c);
}

}  // namespace acceptance
}  // namespace purcell
