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
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "purcell/common/errors.h"
#include "purcell/io/config.h"
#include "purcell/planner/planner.h"
#include "test_support.h"

namespace purcell {
namespace planner {
namespace {

using lie::GroupDirection;
using testing_support::kPi;
using testing_support::TestRng;

const model::SwimmerModel& DefaultModel() {
  static const model::SwimmerModel model(model::SwimmerParams::Default());
  return model;
}

const CalibrationTable& DefaultCalibration() {
  static const CalibrationTable table = Calibrate(
      DefaultModel(), io::ResolveGaitSpecs(io::DefaultConfig(), DefaultModel()));
  return table;
}

// Hand-built table: compilation only reads the cycles and per-cycle amounts.
CalibrationTable SyntheticTable(double dx, double dtheta) {
  CalibrationTable t;
  t.gaits[0].cycle = gait::CommutatorSchedule(1, 2, 1.0);
  t.gaits[0].per_cycle = {dx, 0, 0};
  t.gaits[2].cycle = gait::CommutatorSchedule(1, 2, 1.0, 1.0, 1);
  t.gaits[2].per_cycle = {0, 0, dtheta};
  return t;
}

void ExpectManeuver(const Maneuver& m, Maneuver::Kind kind, double magnitude) {
  EXPECT_EQ(m.kind, kind);
  EXPECT_NEAR(m.magnitude, magnitude, 1e-12);
}

TEST(PlanLineTest, Examples) {
  auto m = PlanLine({}, {1, 0});
  ASSERT_EQ(m.size(), 2u);
  ExpectManeuver(m[0], Maneuver::Kind::kRotate, 0.0);
  ExpectManeuver(m[1], Maneuver::Kind::kTranslate, 1.0);

  const double bearing = 154 * kPi / 180;
  m = PlanLine({}, 0.12 * Eigen::Vector2d(std::cos(bearing), std::sin(bearing)));
  ExpectManeuver(m[0], Maneuver::Kind::kRotate, -26 * kPi / 180);
  ExpectManeuver(m[1], Maneuver::Kind::kTranslate, -0.12);

  m = PlanLine({1, 1, std::atan2(2.0, 1.0)}, {2, 3});
  ExpectManeuver(m[0], Maneuver::Kind::kRotate, 0.0);
  ExpectManeuver(m[1], Maneuver::Kind::kTranslate, std::sqrt(5.0));

  EXPECT_THROW(PlanLine({0.5, 0.5, 0}, {0.5, 0.5}), ValidationError);
}

TEST(PlanLineTest, TurnStaysWithinQuarterCircle) {
  TestRng rng(1);
  for (int i = 0; i < 200; ++i) {
    const geometry::GroupPose start = rng.Pose();
    const Eigen::Vector2d target(rng.Uniform(-3, 3), rng.Uniform(-3, 3));
    const auto m = PlanLine(start, target);
    EXPECT_LE(std::abs(m[0].magnitude), kPi / 2 + 1e-12);
    const double heading = start.theta + m[0].magnitude;
    const Eigen::Vector2d end = Eigen::Vector2d(start.x, start.y) +
                                m[1].magnitude * Eigen::Vector2d(
                                                     std::cos(heading),
                                                     std::sin(heading));
    EXPECT_LT((end - target).norm(), 1e-12);
  }
}

TEST(PlanPolygonTest, TenSidedCircle) {
  const PolygonPlan p = PlanPolygon({0, 0}, 0.2, 10);
  EXPECT_NEAR(p.exterior_turn, 36 * kPi / 180, 1e-15);
  EXPECT_NEAR(p.side_length, 2 * 0.2 * std::sin(kPi / 10), 1e-15);
  EXPECT_NEAR(p.side_length, 0.1236, 1e-4);
  ASSERT_EQ(p.path.points.size(), 11u);
  EXPECT_EQ(p.path.points.front(), p.path.points.back());
  double turns = 0;
  for (const Maneuver& m : p.maneuvers) {
    if (m.kind == Maneuver::Kind::kRotate) turns += m.magnitude;
  }
  EXPECT_NEAR(turns, 2 * kPi, 1e-12);
}

TEST(PlanPolygonTest, SquareSide) {
  const PolygonPlan p = PlanPolygon({1, -1}, 0.3, 4);
  EXPECT_NEAR(p.side_length, 0.3 * std::sqrt(2.0), 1e-15);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR((p.path.points[k + 1] - p.path.points[k]).norm(),
                p.side_length, 1e-14);
  }
  EXPECT_THROW(PlanPolygon({0, 0}, 0.3, 2), ValidationError);
  EXPECT_THROW(PlanPolygon({0, 0}, 0.0, 5), ValidationError);
}

// Executing the maneuvers exactly (pure rotations and base-axis
// translations) visits every vertex.
TEST(PlanPolygonTest, IdealExecutionVisitsVertices) {
  const PolygonPlan p = PlanPolygon({0.1, 0.2}, 0.25, 7);
  geometry::GroupPose g = p.start;
  int vertex = 0;
  for (const Maneuver& m : p.maneuvers) {
    if (m.kind == Maneuver::Kind::kRotate) {
      g = geometry::Compose(g, {0, 0, m.magnitude});
    } else {
      g = geometry::Compose(g, {m.magnitude, 0, 0});
      ++vertex;
      EXPECT_LT((Eigen::Vector2d(g.x, g.y) - p.path.points[vertex]).norm(),
                1e-12);
    }
  }
  EXPECT_EQ(vertex, 7);
}

TEST(CompileTest, RepetitionArithmetic) {
  const CalibrationTable t = SyntheticTable(0.003, 0.04);
  const CompiledPlan none = Compile({Maneuver::Rotate(0)}, t);
  EXPECT_TRUE(none.schedule.empty());
  EXPECT_TRUE(none.warnings.empty());

  const CompiledPlan line = Compile({Maneuver::Translate(0.1)}, t);
  EXPECT_EQ(line.repetitions, std::vector<int>{33});
  EXPECT_EQ(line.schedule.size(), 33u * 4);
  EXPECT_NEAR(line.schedule.maneuver_residuals[0], 0.1 - 33 * 0.003, 1e-15);

  const CompiledPlan back = Compile({Maneuver::Rotate(-0.2)}, t);
  EXPECT_EQ(back.repetitions, std::vector<int>{5});
  EXPECT_EQ(back.schedule.segments.front(),
            gait::Reverse(t.gaits[2].cycle).segments.front());

  const CompiledPlan tiny = Compile({Maneuver::Translate(0.001)}, t);
  EXPECT_TRUE(tiny.schedule.empty());
  EXPECT_EQ(tiny.warnings.size(), 1u);
}

TEST(CompileTest, Linearity) {
  const CalibrationTable t = SyntheticTable(0.003, 0.04);
  TestRng rng(2);
  for (int i = 0; i < 50; ++i) {
    const double d = rng.Uniform(-0.3, 0.3);
    const CompiledPlan twice =
        Compile({Maneuver::Translate(d), Maneuver::Translate(d)}, t);
    const CompiledPlan once = Compile({Maneuver::Translate(2 * d)}, t);
    EXPECT_LE(std::abs(twice.repetitions[0] + twice.repetitions[1] -
                       once.repetitions[0]),
              1);
  }
}

TEST(CompileTest, ManeuverEndsIndexSegments) {
  const CalibrationTable t = SyntheticTable(0.003, 0.04);
  const CompiledPlan p = Compile(
      {Maneuver::Rotate(0.4), Maneuver::Translate(0.03), Maneuver::Rotate(0)},
      t);
  EXPECT_EQ(p.maneuver_ends, (std::vector<std::size_t>{40, 80, 80}));
}

TEST(FitCircleTest, NoiselessPointsAreExact) {
  TestRng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector2d c(rng.Uniform(-1, 1), rng.Uniform(-1, 1));
    const double r = rng.Uniform(0.01, 2);
    std::vector<Eigen::Vector2d> pts;
    for (int k = 0; k < 7; ++k) {
      const double phi = rng.Uniform(0, 2 * kPi);
      pts.push_back(c + r * Eigen::Vector2d(std::cos(phi), std::sin(phi)));
    }
    const Circle fit = FitCircle(pts);
    EXPECT_NEAR(fit.radius, r, 1e-9);
    EXPECT_LT((fit.center - c).norm(), 1e-9);
  }
  EXPECT_THROW(FitCircle({{0, 0}, {1, 1}}), NumericalError);
  EXPECT_THROW(FitCircle({{0, 0}, {1, 1}, {2, 2}}), NumericalError);
}

TEST(TrackingReportTest, ExactTrackingHasNoError) {
  const PolygonPlan p = PlanPolygon({0, 0}, 0.2, 10);
  const TrackingReport r = MakeTrackingReport(p.path, p.path.points, true);
  EXPECT_EQ(r.max_error, 0.0);
  EXPECT_EQ(r.mean_error, 0.0);
  ASSERT_TRUE(r.best_fit.has_value());
  EXPECT_NEAR(r.best_fit->radius, 0.2, 1e-12);
  EXPECT_THROW(MakeTrackingReport(p.path, {{0, 0}}, false), ValidationError);
}

TEST(CalibrateTest, BasisGaitsAtDefaultParameters) {
  const CalibrationTable& t = DefaultCalibration();
  const geometry::GroupPose x = t[GroupDirection::kX].per_cycle;
  EXPECT_GT(std::abs(x.x), 0.0);
  EXPECT_LT(std::abs(x.y), 0.5 * std::abs(x.x));
  EXPECT_LT(std::abs(x.theta), 0.5 * std::abs(x.x));
  EXPECT_GT(std::abs(t[GroupDirection::kTheta].per_cycle.theta), 0.0);
  EXPECT_GT(std::abs(t[GroupDirection::kY].per_cycle.y), 0.0);
  for (const GaitCalibration& g : t.gaits) {
    EXPECT_GE(g.dominance_ratio, kMinDominanceRatio);
    EXPECT_DOUBLE_EQ(g.cycle_duration, g.cycle.total_duration());
  }
  // Frozen per-cycle values.
  EXPECT_NEAR(x.x, 2.965e-3, 1e-6);
  EXPECT_NEAR(t[GroupDirection::kY].per_cycle.y, 4.729e-4, 1e-6);
  EXPECT_NEAR(t[GroupDirection::kTheta].per_cycle.theta, 0.03783, 1e-5);
}

TEST(CalibrateTest, BalancedCycleCancelsLeakage) {
  const auto specs = io::ResolveGaitSpecs(io::DefaultConfig(), DefaultModel());
  const CalibrationTable raw = Calibrate(DefaultModel(), specs, {}, false);
  const CalibrationTable& balanced = DefaultCalibration();
  const geometry::GroupPose r = raw[GroupDirection::kX].per_cycle;
  const geometry::GroupPose b = balanced[GroupDirection::kX].per_cycle;
  EXPECT_LT(std::abs(b.theta) / std::abs(b.x), std::abs(r.theta) / std::abs(r.x));
  EXPECT_EQ(balanced[GroupDirection::kX].cycle.size(),
            2 * raw[GroupDirection::kX].cycle.size());
}

TEST(CalibrateTest, LineHeadingWithinOneRotationQuantum) {
  const CalibrationTable& t = DefaultCalibration();
  const double bearing = 154 * kPi / 180;
  const auto maneuvers = PlanLine(
      {}, 0.12 * Eigen::Vector2d(std::cos(bearing), std::sin(bearing)));
  const CompiledPlan plan = Compile(maneuvers, t);
  sim::IntegratorConfig cfg;
  cfg.sample_stride = 1000;
  const sim::Trajectory traj = sim::Simulate(plan.schedule, {}, DefaultModel(), cfg);
  const double heading = traj.samples.back().pose.theta;
  EXPECT_LE(std::abs(geometry::WrapAngle(heading - maneuvers[0].magnitude)),
            std::abs(t[GroupDirection::kTheta].per_cycle.theta));
}

// Open-loop errors accumulate: the running mean of vertex errors never
// decreases along the polygon.
TEST(CalibrateTest, PolygonErrorsAccumulate) {
  sim::IntegratorConfig cfg;
  cfg.max_step = 0.01;
  cfg.sample_stride = 100;
  const CalibrationTable t = Calibrate(
      DefaultModel(), io::ResolveGaitSpecs(io::DefaultConfig(), DefaultModel()),
      cfg);
  const PolygonPlan polygon = PlanPolygon({0, 0}, 0.08, 5);
  const CompiledPlan plan = Compile(polygon.maneuvers, t);
  const sim::Trajectory traj =
      sim::Simulate(plan.schedule, {{}, polygon.start}, DefaultModel(), cfg);
  const TrackingReport r = MakeTrackingReport(
      polygon.path, ArrivalPoints(traj, plan), true);
  double sum = 0, mean = 0;
  for (std::size_t k = 0; k < r.waypoint_errors.size(); ++k) {
    sum += r.waypoint_errors[k];
    const double next = sum / (k + 1);
    EXPECT_GE(next, mean) << "vertex " << k;
    mean = next;
  }
  EXPECT_GT(r.max_error, 0.0);
  EXPECT_LT(r.max_error, 0.2 * 2 * kPi * 0.08);
}

}  // namespace
}  // namespace planner
}  // namespace purcell
