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

#include "purcell/model/swimmer.h"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>
#include <fmt/format.h>

#include "purcell/common/errors.h"

namespace purcell {
namespace model {

using geometry::WrapAngle;

namespace {

constexpr double kMaxConditionNumber = 1e12;

// 3-point Gauss-Legendre on [-1, 1]; exact for the quadratic integrands of a
// straight link with linear velocity profile.
constexpr std::array<double, 3> kGaussNodes = {-0.7745966692414834, 0.0,
                                               0.7745966692414834};
constexpr std::array<double, 3> kGaussWeights = {5.0 / 9.0, 8.0 / 9.0,
                                                 5.0 / 9.0};

bool IsFinitePositive(double v) { return std::isfinite(v) && v > 0.0; }

void CheckGeometry(const SwimmerParams& p) {
  if (!IsFinitePositive(p.half_length)) {
    throw ValidationError(
        fmt::format("swimmer half length must be > 0, got {}", p.half_length));
  }
  if (!IsFinitePositive(p.radius)) {
    throw ValidationError(
        fmt::format("swimmer radius must be > 0, got {}", p.radius));
  }
  if (p.radius >= p.half_length) {
    throw ValidationError(fmt::format(
        "slenderness violated: radius {} must be smaller than half length {}",
        p.radius, p.half_length));
  }
  if (!IsFinitePositive(p.viscosity)) {
    throw ValidationError(
        fmt::format("viscosity must be > 0, got {}", p.viscosity));
  }
}

// Point on a link at signed arclength s from its midpoint, together with the
// 2x5 Jacobian of its base-frame velocity with respect to
// (xi_x, xi_y, xi_theta, alpha1_dot, alpha2_dot).
struct LinkPoint {
  Eigen::Vector2d position;
  Eigen::Matrix<double, 2, 5> velocity_jacobian;
};

enum class Link { kLeft, kBase, kRight };

// `c`, `sn` are the cosine and sine of the link's joint angle.
LinkPoint EvaluateLinkPoint(Link link, double s, double c, double sn,
                            double L) {
  LinkPoint pt;
  pt.velocity_jacobian.setZero();
  switch (link) {
    case Link::kBase:
      pt.position = {s, 0.0};
      break;
    case Link::kLeft: {
      // u is the distance from the left joint.
      const double u = L - s;
      pt.position = {-L - u * c, u * sn};
      pt.velocity_jacobian.col(3) << u * sn, u * c;
      break;
    }
    case Link::kRight: {
      const double u = L + s;
      pt.position = {L + u * c, u * sn};
      pt.velocity_jacobian.col(4) << -u * sn, u * c;
      break;
    }
  }
  pt.velocity_jacobian.col(0) << 1.0, 0.0;
  pt.velocity_jacobian.col(1) << 0.0, 1.0;
  pt.velocity_jacobian.col(2) << -pt.position.y(), pt.position.x();
  return pt;
}

double LinkOrientation(Link link, const ShapePoint& shape) {
  switch (link) {
    case Link::kLeft:
      return -shape.alpha1;
    case Link::kRight:
      return shape.alpha2;
    case Link::kBase:
      break;
  }
  return 0.0;
}

}  // namespace

SwimmerParams SwimmerParams::Default() {
  return DeriveDragCoefficients(SwimmerParams{});
}

SwimmerParams DeriveDragCoefficients(SwimmerParams params) {
  CheckGeometry(params);
  const double log_ratio = std::log(2.0 * params.half_length / params.radius);
  params.k_long = 2.0 * std::numbers::pi * params.viscosity / log_ratio;
  params.k_lat = 4.0 * std::numbers::pi * params.viscosity / log_ratio;
  params.source = DragSource::kResistiveForceTheory;
  return params;
}

SwimmerParams DragCoefficientsFromForces(SwimmerParams params,
                                         double normal_force,
                                         double tangential_force,
                                         double velocity) {
  CheckGeometry(params);
  if (!IsFinitePositive(velocity)) {
    throw ValidationError(fmt::format(
        "measured-force drag needs a calibration velocity > 0, got {}",
        velocity));
  }
  if (!IsFinitePositive(normal_force) || !IsFinitePositive(tangential_force)) {
    throw ValidationError("measured drag forces must be > 0");
  }
  const double link_length = 2.0 * params.half_length;
  params.k_lat = normal_force / (velocity * link_length);
  params.k_long = tangential_force / (velocity * link_length);
  params.source = DragSource::kMeasuredForces;
  ValidateParams(params);
  return params;
}

void ValidateParams(const SwimmerParams& params) {
  CheckGeometry(params);
  if (!IsFinitePositive(params.k_long) || !IsFinitePositive(params.k_lat)) {
    throw ValidationError("drag coefficients k_long, k_lat must be set and > 0");
  }
  if (params.k_lat <= params.k_long) {
    throw ValidationError(fmt::format(
        "lateral drag k_lat = {} must exceed longitudinal drag k_long = {}",
        params.k_lat, params.k_long));
  }
}

ShapePoint ShapePoint::Wrapped(double alpha1, double alpha2) {
  return {WrapAngle(alpha1), WrapAngle(alpha2)};
}

double TorusDistance(const ShapePoint& a, const ShapePoint& b) {
  return std::hypot(WrapAngle(a.alpha1 - b.alpha1),
                    WrapAngle(a.alpha2 - b.alpha2));
}

Vector5d Configuration::AsCoordinates() const {
  Vector5d q;
  q << shape.alpha1, shape.alpha2, pose.x, pose.y, pose.theta;
  return q;
}

Configuration Configuration::FromCoordinates(const Vector5d& q) {
  return {ShapePoint::Wrapped(q(0), q(1)), {q(2), q(3), WrapAngle(q(4))}};
}

SwimmerModel::SwimmerModel(const SwimmerParams& params) : params_(params) {
  ValidateParams(params_);
}

LinkFrames SwimmerModel::link_frames(const ShapePoint& shape) const {
  const double L = params_.half_length;
  const LinkPoint left = EvaluateLinkPoint(
      Link::kLeft, 0.0, std::cos(shape.alpha1), std::sin(shape.alpha1), L);
  const LinkPoint right = EvaluateLinkPoint(
      Link::kRight, 0.0, std::cos(shape.alpha2), std::sin(shape.alpha2), L);
  return {
      {left.position.x(), left.position.y(),
       WrapAngle(LinkOrientation(Link::kLeft, shape))},
      GroupPose::Identity(),
      {right.position.x(), right.position.y(),
       WrapAngle(LinkOrientation(Link::kRight, shape))},
  };
}

DragMatrices SwimmerModel::drag_matrices(const ShapePoint& shape) const {
  const double L = params_.half_length;
  Eigen::Matrix<double, 3, 5> wrench = Eigen::Matrix<double, 3, 5>::Zero();
  for (Link link : {Link::kLeft, Link::kBase, Link::kRight}) {
    const double joint = link == Link::kLeft ? shape.alpha1 : shape.alpha2;
    const double c = link == Link::kBase ? 1.0 : std::cos(joint);
    const double sn = link == Link::kBase ? 0.0 : std::sin(joint);
    // Orientation is -alpha1 for the left link, +alpha2 for the right.
    const Eigen::Vector2d tangent(c, link == Link::kLeft ? -sn : sn);
    const Eigen::Vector2d normal(-tangent.y(), tangent.x());
    // Resistance tensor: force density = -K * v.
    const Eigen::Matrix2d K = params_.k_long * tangent * tangent.transpose() +
                              params_.k_lat * normal * normal.transpose();
    for (int i = 0; i < 3; ++i) {
      const double s = L * kGaussNodes[i];
      const LinkPoint pt = EvaluateLinkPoint(link, s, c, sn, L);
      // Rows map a force at pt.position to (Fx, Fy, moment about origin).
      Eigen::Matrix<double, 3, 2> to_wrench;
      to_wrench << 1.0, 0.0, 0.0, 1.0, -pt.position.y(), pt.position.x();
      wrench -= (L * kGaussWeights[i]) * to_wrench * K * pt.velocity_jacobian;
    }
  }
  DragMatrices out;
  out.omega1 = wrench.leftCols<3>();
  out.omega2 = wrench.rightCols<2>();
  return out;
}

ConnectionForm SwimmerModel::connection(const ShapePoint& shape) const {
  const DragMatrices drag = drag_matrices(shape);
  const Eigen::PartialPivLU<Eigen::Matrix3d> lu(drag.omega1);
  ConnectionForm form;
  form.omega1_rcond = lu.rcond();
  if (!(form.omega1_rcond * kMaxConditionNumber > 1.0)) {
    throw NumericalError(fmt::format(
        "drag matrix omega1 is singular at shape ({}, {}): rcond = {}",
        shape.alpha1, shape.alpha2, form.omega1_rcond));
  }
  form.A = lu.solve(drag.omega2);
  return form;
}

BodyVelocity SwimmerModel::body_velocity(const ShapePoint& shape,
                                         const ShapeVelocity& rate) const {
  const Eigen::Vector3d xi = -connection(shape).A * rate.AsVector();
  return BodyVelocity::FromVector(xi);
}

TangentVector5 SwimmerModel::control_field(int channel,
                                           const Configuration& q) const {
  if (channel != 1 && channel != 2) {
    throw ValidationError(
        fmt::format("control channel must be 1 or 2, got {}", channel));
  }
  const ConnectionForm form = connection(q.shape);
  TangentVector5 g = TangentVector5::Zero();
  g(channel - 1) = 1.0;
  g.tail<3>() = -form.A.col(channel - 1);
  return g;
}

TangentVector5 SwimmerModel::control_field_coordinates(
    int channel, const Configuration& q) const {
  TangentVector5 g = control_field(channel, q);
  g.tail<3>() = geometry::WorldRate(
      q.pose, BodyVelocity::FromVector(g.tail<3>()));
  return g;
}

}  // namespace model
}  // namespace purcell
