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

#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "purcell/acceptance/oracle.h"
#include "purcell/common/errors.h"
#include "purcell/model/swimmer.h"
#include "test_support.h"

namespace purcell {
namespace model {
namespace {

using testing_support::kPi;
using testing_support::TestRng;

SwimmerParams RftParams(double L, double b, double mu) {
  SwimmerParams p;
  p.half_length = L;
  p.radius = b;
  p.viscosity = mu;
  return DeriveDragCoefficients(p);
}

// Mirror x -> -x relabels the links: (a1, a2) -> (a2, a1) and
// (xi_x, xi_y, xi_theta) -> (-xi_x, xi_y, -xi_theta).
const Eigen::Matrix3d kMirrorX = Eigen::Vector3d(-1, 1, -1).asDiagonal();
// Mirror y -> -y: (a1, a2) -> (-a1, -a2), (xi_x, -xi_y, -xi_theta).
const Eigen::Matrix3d kMirrorY = Eigen::Vector3d(1, -1, -1).asDiagonal();

TEST(DragCoefficientTest, SlenderBodyFormula) {
  const SwimmerParams p = SwimmerParams::Default();
  EXPECT_NEAR(p.k_long, 2 * kPi * 0.950 / std::log(20.0), 1e-12);
  EXPECT_NEAR(p.k_long, 1.99251, 1e-5);
  EXPECT_NEAR(p.k_lat, 3.98502, 1e-5);
  TestRng rng(3);
  for (int i = 0; i < 20; ++i) {
    const double L = rng.Uniform(0.01, 0.2);
    const SwimmerParams q =
        RftParams(L, L * rng.Uniform(0.01, 0.5), rng.Uniform(0.1, 5));
    EXPECT_DOUBLE_EQ(q.k_lat / q.k_long, 2.0);
  }
}

TEST(DragCoefficientTest, RejectsInvalidParameters) {
  EXPECT_THROW(RftParams(0.05, 0.05, 0.95), ValidationError);
  EXPECT_GT(RftParams(0.05, 0.0499999, 0.95).k_long, 0.0);
  EXPECT_THROW(RftParams(0.05, 0.06, 0.95), ValidationError);
  EXPECT_THROW(RftParams(-0.05, 0.005, 0.95), ValidationError);
  EXPECT_THROW(RftParams(0.05, 0.005, 0.0), ValidationError);
  SwimmerParams unset;
  EXPECT_THROW(SwimmerModel{unset}, ValidationError);
}

TEST(DragCoefficientTest, MeasuredForces) {
  SwimmerParams p = SwimmerParams::Default();
  const double v = 0.01;
  const SwimmerParams m =
      DragCoefficientsFromForces(p, 0.005922, 0.0001013, v);
  EXPECT_EQ(m.source, DragSource::kMeasuredForces);
  EXPECT_NEAR(m.k_lat, 0.005922 / (v * 0.1), 1e-12);
  EXPECT_NEAR(m.k_long, 0.0001013 / (v * 0.1), 1e-12);
  EXPECT_THROW(DragCoefficientsFromForces(p, 0.005922, 0.0001013, 0.0),
               ValidationError);
  EXPECT_THROW(DragCoefficientsFromForces(p, 0.0001, 0.001, v),
               ValidationError);
}

TEST(ShapePointTest, WrapsOntoTorus) {
  const ShapePoint s = ShapePoint::Wrapped(4.0, -4.0);
  EXPECT_NEAR(s.alpha1, 4.0 - 2 * kPi, 1e-15);
  EXPECT_NEAR(s.alpha2, 2 * kPi - 4.0, 1e-15);
  EXPECT_NEAR(TorusDistance({3.1, 0}, {-3.1, 0}), 2 * kPi - 6.2, 1e-12);
}

TEST(LinkFramesTest, StraightShapeIsCollinear) {
  const SwimmerModel model(SwimmerParams::Default());
  const double L = model.params().half_length;
  const LinkFrames f = model.link_frames({0, 0});
  EXPECT_NEAR(f.left.x, -2 * L, 1e-15);
  EXPECT_NEAR(f.right.x, 2 * L, 1e-15);
  EXPECT_EQ(f.base.x, 0.0);
  for (const auto& g : {f.left, f.base, f.right}) {
    EXPECT_NEAR(g.y, 0.0, 1e-15);
    EXPECT_NEAR(g.theta, 0.0, 1e-15);
  }
}

// Left link heading is -alpha1: a quarter turn folds the left link up.
TEST(LinkFramesTest, QuarterTurnOfLeftJoint) {
  const SwimmerModel model(SwimmerParams::Default());
  const double L = model.params().half_length;
  const LinkFrames f = model.link_frames({kPi / 2, 0});
  EXPECT_NEAR(f.left.x, -L, 1e-15);
  EXPECT_NEAR(f.left.y, L, 1e-15);
  EXPECT_NEAR(f.left.theta, -kPi / 2, 1e-15);
  EXPECT_NEAR(f.right.x, 2 * L, 1e-15);
}

TEST(LinkFramesTest, NegatedShapeReflectsAcrossBaseAxis) {
  const SwimmerModel model(SwimmerParams::Default());
  TestRng rng(4);
  for (int i = 0; i < 20; ++i) {
    const double a = rng.Uniform(-3, 3);
    const LinkFrames f = model.link_frames({a, a});
    const LinkFrames g = model.link_frames({-a, -a});
    for (auto [p, q] : {std::pair{f.left, g.left}, std::pair{f.right, g.right}}) {
      EXPECT_NEAR(p.x, q.x, 1e-15);
      EXPECT_NEAR(p.y, -q.y, 1e-15);
      EXPECT_NEAR(geometry::WrapAngle(p.theta + q.theta), 0.0, 1e-15);
    }
  }
}

// Hand-derived straight-shape oracle: the three rods lie on the x axis from
// -3L to 3L, so every integral is elementary.
TEST(DragMatricesTest, StraightShapeClosedForm) {
  const SwimmerModel model(SwimmerParams::Default());
  const double L = model.params().half_length;
  const double kl = model.params().k_long, kt = model.params().k_lat;
  const DragMatrices d = model.drag_matrices({0, 0});
  Eigen::Matrix3d omega1 = Eigen::Matrix3d::Zero();
  omega1.diagonal() << -6 * L * kl, -6 * L * kt, -18 * L * L * L * kt;
  Matrix32d omega2;
  omega2 << 0, 0, -2 * L * L * kt, -2 * L * L * kt, 14.0 / 3 * L * L * L * kt,
      -14.0 / 3 * L * L * L * kt;
  EXPECT_LT((d.omega1 - omega1).norm(), 1e-14);
  EXPECT_LT((d.omega2 - omega2).norm(), 1e-14);

  Matrix32d a;
  a << 0, 0, L / 3, L / 3, -7.0 / 27, 7.0 / 27;
  EXPECT_LT((model.connection({0, 0}).A - a).norm(), 1e-14);
}

TEST(DragMatricesTest, Omega1SymmetricNegativeDefiniteOnGrid) {
  const SwimmerModel model(SwimmerParams::Default());
  for (int i = 0; i < 24; ++i) {
    for (int j = 0; j < 24; ++j) {
      const ShapePoint s = ShapePoint::Wrapped(-kPi + (i + 0.5) * kPi / 12,
                                               -kPi + (j + 0.5) * kPi / 12);
      const DragMatrices d = model.drag_matrices(s);
      EXPECT_LT((d.omega1 - d.omega1.transpose()).norm(), 1e-10);
      const Eigen::Vector3d eig =
          Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(-d.omega1)
              .eigenvalues();
      EXPECT_GT(eig.minCoeff(), 0.0);
      const ConnectionForm c = model.connection(s);
      EXPECT_LT((d.omega1 * c.A - d.omega2).norm(), 1e-10);
      EXPECT_TRUE(c.A.allFinite());
    }
  }
}

TEST(DragMatricesTest, ScalingDragCoefficients) {
  SwimmerParams p = SwimmerParams::Default();
  const SwimmerModel base(p);
  p.k_long *= 2;
  p.k_lat *= 2;
  const SwimmerModel doubled(p);
  TestRng rng(8);
  for (int i = 0; i < 20; ++i) {
    const ShapePoint s = rng.Shape();
    const DragMatrices a = base.drag_matrices(s), b = doubled.drag_matrices(s);
    EXPECT_LT((2 * a.omega1 - b.omega1).norm(), 1e-14);
    EXPECT_LT((2 * a.omega2 - b.omega2).norm(), 1e-14);
    EXPECT_LT((base.connection(s).A - doubled.connection(s).A).norm(), 1e-12);
  }
}

TEST(ConnectionTest, StraightShapeColumnsAreMirrorImages) {
  const SwimmerModel model(SwimmerParams::Default());
  const Matrix32d a = model.connection({0, 0}).A;
  EXPECT_EQ(a(0, 0), 0.0);
  EXPECT_EQ(a(0, 1), 0.0);
  EXPECT_LT((kMirrorX * a.col(0) - a.col(1)).norm(), 1e-15);
}

TEST(ConnectionTest, ReflectionIdentitiesAtRandomShapes) {
  SwimmerParams p = SwimmerParams::Default();
  p.k_lat = 3.3 * p.k_long;
  for (const SwimmerParams& params : {SwimmerParams::Default(), p}) {
    const SwimmerModel model(params);
    TestRng rng(21);
    for (int i = 0; i < 50; ++i) {
      const ShapePoint s = rng.Shape();
      const Matrix32d a = model.connection(s).A;
      const Matrix32d swapped = model.connection({s.alpha2, s.alpha1}).A;
      const Matrix32d negated =
          model.connection(ShapePoint::Wrapped(-s.alpha1, -s.alpha2)).A;
      Matrix32d swapped_cols;
      swapped_cols << swapped.col(1), swapped.col(0);
      EXPECT_LT((swapped_cols - kMirrorX * a).norm(), 1e-12);
      EXPECT_LT((negated + kMirrorY * a).norm(), 1e-12);
    }
  }
}

TEST(BodyVelocityTest, ZeroRateGivesZeroVelocity) {
  const SwimmerModel model(SwimmerParams::Default());
  EXPECT_EQ(model.body_velocity({0.3, -1.1}, {0, 0}).AsVector(),
            Eigen::Vector3d::Zero());
}

// A stroke that keeps the swimmer symmetric cannot produce the velocity
// components the symmetry flips. (a, a) is mirror symmetric about the body
// y axis; (a, -a) is symmetric under a half turn.
TEST(BodyVelocityTest, SymmetricStrokes) {
  const SwimmerModel model(SwimmerParams::Default());
  for (double a : {0.2, 0.7, 1.4}) {
    const Eigen::Vector3d sway =
        model.body_velocity({a, a}, {0.6, 0.6}).AsVector();
    EXPECT_NEAR(sway.x(), 0.0, 1e-15);
    EXPECT_NEAR(sway.z(), 0.0, 1e-14);
    EXPECT_GT(std::abs(sway.y()), 1e-4);

    const Eigen::Vector3d spin =
        model.body_velocity({a, -a}, {0.6, -0.6}).AsVector();
    EXPECT_NEAR(spin.x(), 0.0, 1e-15);
    EXPECT_NEAR(spin.y(), 0.0, 1e-15);
    EXPECT_GT(std::abs(spin.z()), 1e-2);

    const Eigen::Vector3d glide =
        model.body_velocity({a, -a}, {0.6, 0.6}).AsVector();
    EXPECT_NEAR(glide.z(), 0.0, 1e-14);
    EXPECT_GT(glide.head<2>().norm(), 1e-4);
  }
}

TEST(BodyVelocityTest, MatchesDenseQuadratureOracle) {
  const SwimmerParams p = SwimmerParams::Default();
  const SwimmerModel model(p);
  const Eigen::Vector3d xi = model.body_velocity({0.3, -0.2}, {1, 0.5}).AsVector();
  const Eigen::Vector3d oracle =
      acceptance::OracleBodyVelocity(p, {0.3, -0.2}, {1, 0.5});
  EXPECT_LT((xi - oracle).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ControlFieldTest, Structure) {
  const SwimmerModel model(SwimmerParams::Default());
  TestRng rng(2);
  for (int i = 0; i < 20; ++i) {
    Configuration q{rng.Shape(), rng.Pose()};
    Configuration moved{q.shape, rng.Pose()};
    const TangentVector5 g1 = model.control_field(1, q);
    const TangentVector5 g2 = model.control_field(2, q);
    EXPECT_EQ(g1.head<2>(), Eigen::Vector2d(1, 0));
    EXPECT_EQ(g2.head<2>(), Eigen::Vector2d(0, 1));
    EXPECT_EQ(g1, model.control_field(1, moved));
    const Matrix32d a = model.connection(q.shape).A;
    EXPECT_LT((g1.tail<3>() + a.col(0)).norm(), 1e-15);
    EXPECT_LT((g2.tail<3>() + a.col(1)).norm(), 1e-15);
    EXPECT_TRUE(g1.allFinite());

    // Coordinate form rotates the group part into the world frame.
    const TangentVector5 c1 = model.control_field_coordinates(1, q);
    EXPECT_EQ(c1.head<2>(), g1.head<2>());
    const Eigen::Vector3d world = geometry::WorldRate(
        q.pose, geometry::BodyVelocity::FromVector(g1.tail<3>()));
    EXPECT_LT((c1.tail<3>() - world).norm(), 1e-15);
  }
  EXPECT_THROW(model.control_field(3, {}), ValidationError);
}

TEST(ControlFieldTest, StraightShapeValue) {
  const SwimmerModel model(SwimmerParams::Default());
  const double L = model.params().half_length;
  const TangentVector5 g1 = model.control_field(1, {});
  EXPECT_NEAR(g1(2), 0.0, 1e-15);
  EXPECT_NEAR(g1(3), -L / 3, 1e-15);
  EXPECT_NEAR(g1(4), 7.0 / 27, 1e-14);
}

}  // namespace
}  // namespace model
}  // namespace purcell
