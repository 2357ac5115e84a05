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

#include <Eigen/Core>

#include "purcell/geometry/se2.h"

namespace purcell {
namespace model {

using geometry::BodyVelocity;
using geometry::GroupPose;

using Vector5d = Eigen::Matrix<double, 5, 1>;
using Matrix5d = Eigen::Matrix<double, 5, 5>;
using Matrix32d = Eigen::Matrix<double, 3, 2>;

/// Tangent vector on Q = S^1 x S^1 x SE(2), ordered
/// (alpha1, alpha2, x, y, theta).
using TangentVector5 = Vector5d;

/// Where the per-unit-length drag coefficients came from. The two sources are
/// never mixed.
enum class DragSource {
  kResistiveForceTheory,
  kMeasuredForces,
};

/// Geometry and fluid parameters of the three-link swimmer. Each link is a
/// slender rod of length 2 * half_length and radius `radius`. `k_long` and
/// `k_lat` are drag force per unit length per unit velocity (N s / m^2).
struct SwimmerParams {
  double half_length{0.05};
  double radius{0.005};
  double viscosity{0.950};
  double k_long{0.0};
  double k_lat{0.0};
  DragSource source{DragSource::kResistiveForceTheory};

  /// Defaults with the slender-body coefficients filled in.
  static SwimmerParams Default();
};

/// Fills k_long = 2 pi mu / ln(2L / b) and k_lat = 4 pi mu / ln(2L / b).
/// Throws ValidationError unless 0 < b < L and mu > 0.
SwimmerParams DeriveDragCoefficients(SwimmerParams params);

/// Converts measured total drag forces on one link (normal and tangential,
/// in newtons, at calibration flow speed `velocity`) into per-unit-length
/// coefficients k = F / (velocity * 2L).
SwimmerParams DragCoefficientsFromForces(SwimmerParams params,
                                         double normal_force,
                                         double tangential_force,
                                         double velocity);

/// Throws ValidationError if any invariant of SwimmerParams is violated,
/// including unset drag coefficients.
void ValidateParams(const SwimmerParams& params);

/// Joint angles, each wrapped into (-pi, pi].
struct ShapePoint {
  double alpha1{0.0};
  double alpha2{0.0};

  static ShapePoint Wrapped(double alpha1, double alpha2);
};

struct ShapeVelocity {
  double alpha1_dot{0.0};
  double alpha2_dot{0.0};

  Eigen::Vector2d AsVector() const { return {alpha1_dot, alpha2_dot}; }
};

/// Euclidean distance on the flat torus.
double TorusDistance(const ShapePoint& a, const ShapePoint& b);

struct Configuration {
  ShapePoint shape;
  GroupPose pose;

  /// (alpha1, alpha2, x, y, theta).
  Vector5d AsCoordinates() const;
  /// Inverse of AsCoordinates; wraps all three angles.
  static Configuration FromCoordinates(const Vector5d& q);
};

/// Drag wrench per unit generalized velocity, about the base-link midpoint in
/// base-link coordinates. Total wrench = omega1 * xi + omega2 * rdot.
struct DragMatrices {
  Eigen::Matrix3d omega1;
  Matrix32d omega2;
};

/// A(r) = omega1^-1 omega2; body velocity is xi = -A(r) rdot.
struct ConnectionForm {
  Matrix32d A;
  /// Reciprocal condition estimate of omega1 from the LU factorization.
  double omega1_rcond{0.0};
};

/// Midpoint frames of the three links in base-link coordinates.
struct LinkFrames {
  GroupPose left;
  GroupPose base;
  GroupPose right;
};

/// The kinematic (resistive-force) model of the three-link swimmer.
///
/// Angle convention: the base link lies on its own x-axis with joints at
/// (-L, 0) and (+L, 0). The left link has orientation -alpha1 and the right
/// link orientation +alpha2, so positive angles fold both outer links toward
/// +y and the shape (a, a) is mirror-symmetric about the base-link y-axis.
/// Under this convention the swap (a1, a2) -> (a2, a1) is the reflection
/// x -> -x and (a1, a2) -> (-a1, -a2) is the reflection y -> -y.
class SwimmerModel {
 public:
  /// Throws ValidationError if `params` is invalid.
  explicit SwimmerModel(const SwimmerParams& params);

  const SwimmerParams& params() const { return params_; }

  LinkFrames link_frames(const ShapePoint& shape) const;

  DragMatrices drag_matrices(const ShapePoint& shape) const;

  /// Throws NumericalError when omega1 has condition number above 1e12.
  ConnectionForm connection(const ShapePoint& shape) const;

  BodyVelocity body_velocity(const ShapePoint& shape,
                             const ShapeVelocity& rate) const;

  /// Control field g_channel (channel 1 or 2) in body-adapted form: shape
  /// part e_channel, group part -A_channel(shape) as a body velocity. Never
  /// depends on the pose of `q`.
  TangentVector5 control_field(int channel, const Configuration& q) const;

  /// The same field in coordinates (alpha1, alpha2, x, y, theta): group part
  /// rotated into the world frame by the pose of `q`. This is the form whose
  /// coordinate Lie brackets are meaningful.
  TangentVector5 control_field_coordinates(int channel,
                                           const Configuration& q) const;

 private:
  SwimmerParams params_;
};

}  // namespace model
}  // namespace purcell
