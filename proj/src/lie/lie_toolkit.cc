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

#include "purcell/lie/lie_toolkit.h"

#include <cmath>
#include <utility>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "purcell/common/errors.h"

namespace purcell {
namespace lie {

using model::Vector5d;

namespace {

// Group parts must vanish by construction; anything larger is a bug in the
// field or in the differencing.
constexpr double kShapePartTolerance = 1e-8;
constexpr double kMinCoefficientRcond = 1e-10;

TangentVector5 Evaluate(const VectorFieldHandle& field, const Vector5d& q) {
  return field(Configuration::FromCoordinates(q));
}

}  // namespace

Matrix5d Jacobian(const VectorFieldHandle& field, const Configuration& q,
                  const DifferenceOptions& options) {
  const double h = options.step;
  if (!(h > 0.0)) {
    throw ValidationError(
        fmt::format("finite-difference step must be > 0, got {}", h));
  }
  const Vector5d q0 = q.AsCoordinates();
  Matrix5d jac;
  for (int j = 0; j < 5; ++j) {
    Vector5d e = Vector5d::Zero();
    e(j) = h;
    const TangentVector5 d1 = Evaluate(field, q0 + e) - Evaluate(field, q0 - e);
    if (options.scheme == DifferenceScheme::kCentral2) {
      jac.col(j) = d1 / (2.0 * h);
    } else {
      const TangentVector5 d2 =
          Evaluate(field, q0 + 2.0 * e) - Evaluate(field, q0 - 2.0 * e);
      jac.col(j) = (8.0 * d1 - d2) / (12.0 * h);
    }
  }
  return jac;
}

TangentVector5 LieBracket(const VectorFieldHandle& x_field,
                          const VectorFieldHandle& y_field,
                          const Configuration& q,
                          const DifferenceOptions& options) {
  return Jacobian(y_field, q, options) * x_field(q) -
         Jacobian(x_field, q, options) * y_field(q);
}

VectorFieldHandle BracketField(VectorFieldHandle x_field,
                               VectorFieldHandle y_field,
                               DifferenceOptions options) {
  return [x = std::move(x_field), y = std::move(y_field),
          options](const Configuration& q) {
    return LieBracket(x, y, q, options);
  };
}

VectorFieldHandle ControlFieldHandle(const SwimmerModel& model, int channel) {
  return [model, channel](const Configuration& q) {
    return model.control_field_coordinates(channel, q);
  };
}

std::array<TangentVector5, 5> BracketBasis(const SwimmerModel& model,
                                           const Configuration& q,
                                           const DifferenceOptions& options) {
  const VectorFieldHandle g1 = ControlFieldHandle(model, 1);
  const VectorFieldHandle g2 = ControlFieldHandle(model, 2);
  const VectorFieldHandle g12 = BracketField(g1, g2, options);
  return {g1(q), g2(q), g12(q), LieBracket(g1, g12, q, options),
          LieBracket(g2, g12, q, options)};
}

ControllabilityReport RankReport(const Configuration& point,
                                 const std::array<TangentVector5, 5>& vectors,
                                 double tol) {
  if (!(tol > 0.0)) {
    throw ValidationError(fmt::format("rank tolerance must be > 0, got {}", tol));
  }
  Matrix5d m;
  for (int i = 0; i < 5; ++i) m.col(i) = vectors[i];
  const Eigen::JacobiSVD<Matrix5d> svd(m);
  ControllabilityReport report;
  report.point = point;
  report.vectors = vectors;
  report.singular_values = svd.singularValues();
  const double sigma_max = report.singular_values(0);
  for (int i = 0; i < 5; ++i) {
    if (report.singular_values(i) > tol * sigma_max) ++report.rank;
  }
  return report;
}

ControllabilityReport ControllabilityAt(const SwimmerModel& model,
                                        const Configuration& p, double tol) {
  return RankReport(p, BracketBasis(model, p), tol);
}

const char* DirectionName(GroupDirection direction) {
  switch (direction) {
    case GroupDirection::kX:
      return "x";
    case GroupDirection::kY:
      return "y";
    case GroupDirection::kTheta:
      return "theta";
  }
  return "?";
}

BracketCoefficients SolveBracketCoefficients(const SwimmerModel& model,
                                             const Eigen::Vector3d& target,
                                             const Configuration& p) {
  const std::array<TangentVector5, 5> basis = BracketBasis(model, p);
  Eigen::Matrix3d group_parts;
  for (int i = 0; i < 3; ++i) {
    const TangentVector5& v = basis[2 + i];
    if (v.head<2>().cwiseAbs().maxCoeff() > kShapePartTolerance) {
      throw NumericalError(fmt::format(
          "bracket {} has nonzero shape part ({}, {})", i, v(0), v(1)));
    }
    group_parts.col(i) =
        geometry::BodyRate(p.pose, v.tail<3>()).AsVector();
  }
  const Eigen::PartialPivLU<Eigen::Matrix3d> lu(group_parts);
  if (!(lu.rcond() > kMinCoefficientRcond)) {
    throw NumericalError(fmt::format(
        "brackets do not span the group directions at shape ({}, {}): "
        "rcond = {}",
        p.shape.alpha1, p.shape.alpha2, lu.rcond()));
  }
  const Eigen::Vector3d c = lu.solve(target);
  return {c(0), c(1), c(2)};
}

BracketCoefficients SolveBracketCoefficients(const SwimmerModel& model,
                                             GroupDirection direction,
                                             const Configuration& p) {
  Eigen::Vector3d target = Eigen::Vector3d::Zero();
  target(static_cast<int>(direction)) = 1.0;
  return SolveBracketCoefficients(model, target, p);
}

}  // namespace lie
}  // namespace purcell
