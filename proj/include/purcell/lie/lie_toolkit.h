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
#include <functional>

#include <Eigen/Core>

#include "purcell/model/swimmer.h"

namespace purcell {
namespace lie {

using model::Configuration;
using model::Matrix5d;
using model::SwimmerModel;
using model::TangentVector5;

/// A smooth vector field on Q, evaluated in the coordinates
/// (alpha1, alpha2, x, y, theta). Must be re-entrant.
using VectorFieldHandle = std::function<TangentVector5(const Configuration&)>;

enum class DifferenceScheme {
  /// (f(q + h) - f(q - h)) / 2h; exact on quadratics.
  kCentral2,
  /// Five-point stencil; exact on quartics.
  kCentral4,
};

struct DifferenceOptions {
  double step{1e-5};
  DifferenceScheme scheme{DifferenceScheme::kCentral2};
};

/// Step settings used for the bracket basis in controllability and
/// coefficient computations. Second-level brackets difference a
/// differenced quantity, so roundoff grows like eps / h^2; a wider
/// fourth-order stencil keeps both roundoff and truncation near 1e-10.
inline constexpr DifferenceOptions kBracketDifference{
    1e-3, DifferenceScheme::kCentral4};

/// d X / d q at q. Column j perturbs coordinate j; shape perturbations wrap on
/// the torus. Throws ValidationError if options.step <= 0.
Matrix5d Jacobian(const VectorFieldHandle& field, const Configuration& q,
                  const DifferenceOptions& options = {});

/// [X, Y](q) = DY(q) X(q) - DX(q) Y(q).
TangentVector5 LieBracket(const VectorFieldHandle& x_field,
                          const VectorFieldHandle& y_field,
                          const Configuration& q,
                          const DifferenceOptions& options = {});

/// Wraps [X, Y] as a field so it can be bracketed again. The inner bracket is
/// recomputed at every evaluation point.
VectorFieldHandle BracketField(VectorFieldHandle x_field,
                               VectorFieldHandle y_field,
                               DifferenceOptions options = {});

/// g1 or g2 of `model` in coordinates. The handle keeps a copy of the model.
VectorFieldHandle ControlFieldHandle(const SwimmerModel& model, int channel);

/// g1, g2, [g1,g2], [g1,[g1,g2]], [g2,[g1,g2]] at q, in that order.
std::array<TangentVector5, 5> BracketBasis(
    const SwimmerModel& model, const Configuration& q,
    const DifferenceOptions& options = kBracketDifference);

struct ControllabilityReport {
  Configuration point;
  std::array<TangentVector5, 5> vectors;
  /// Nonincreasing.
  Eigen::Matrix<double, 5, 1> singular_values;
  int rank{0};
};

/// Rank of an arbitrary set of five tangent vectors at relative tolerance
/// `tol`: #{sigma_i > tol * sigma_max}.
ControllabilityReport RankReport(const Configuration& point,
                                 const std::array<TangentVector5, 5>& vectors,
                                 double tol);

/// Strong-controllability rank test of the bracket basis at p.
/// Throws ValidationError if tol <= 0.
ControllabilityReport ControllabilityAt(const SwimmerModel& model,
                                        const Configuration& p,
                                        double tol = 1e-8);

enum class GroupDirection { kX, kY, kTheta };

const char* DirectionName(GroupDirection direction);

struct BracketCoefficients {
  double alpha{0.0};
  double beta{0.0};
  double gamma{0.0};

  Eigen::Vector3d AsVector() const { return {alpha, beta, gamma}; }
};

/// Solves alpha [g1,g2] + beta [g1,[g1,g2]] + gamma [g2,[g1,g2]] = target at
/// p, using the group parts of the brackets expressed in the body frame of p.
/// Throws NumericalError if the three group parts do not span se(2) at p.
BracketCoefficients SolveBracketCoefficients(const SwimmerModel& model,
                                             const Eigen::Vector3d& target,
                                             const Configuration& p);

/// Unit-target convenience overload.
BracketCoefficients SolveBracketCoefficients(
    const SwimmerModel& model, GroupDirection direction,
    const Configuration& p = Configuration{});

}  // namespace lie
}  // namespace purcell
