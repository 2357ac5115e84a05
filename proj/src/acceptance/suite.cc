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

#include "purcell/acceptance/suite.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "purcell/acceptance/oracle.h"
#include "purcell/io/config.h"
#include "purcell/lie/lie_toolkit.h"
#include "purcell/planner/planner.h"

namespace purcell {
namespace acceptance {

namespace {

using geometry::GroupPose;
using lie::GroupDirection;
using model::Configuration;
using model::ShapePoint;
using model::SwimmerModel;
using model::SwimmerParams;

constexpr double kPi = std::numbers::pi;
constexpr std::array<double, 4> kEpsLadder = {0.2, 0.1, 0.05, 0.025};
constexpr double kMinSlope = 2.7;

struct Outcome {
  bool passed{false};
  std::string detail;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int Int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  GroupPose Pose() {
    return {Uniform(-1.0, 1.0), Uniform(-1.0, 1.0), Uniform(-kPi, kPi)};
  }

 private:
  std::mt19937_64 engine_;
};

const SwimmerModel& DefaultModel() {
  static const SwimmerModel model(SwimmerParams::Default());
  return model;
}

Outcome ControllabilityRank(Rng& rng) {
  const SwimmerModel& model = DefaultModel();
  constexpr int kGrid = 12;
  std::array<GroupPose, 3> poses = {rng.Pose(), rng.Pose(), rng.Pose()};
  int min_rank = 5;
  int points = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const GroupPose& pose : poses) {
    for (int i = 0; i < kGrid; ++i) {
      for (int j = 0; j < kGrid; ++j) {
        const Configuration q{
            ShapePoint::Wrapped(-kPi + i * 2.0 * kPi / kGrid,
                                -kPi + j * 2.0 * kPi / kGrid),
            pose};
        const lie::ControllabilityReport r = lie::ControllabilityAt(model, q);
        min_rank = std::min(min_rank, r.rank);
        min_ratio = std::min(min_ratio,
                             r.singular_values(4) / r.singular_values(0));
        ++points;
      }
    }
  }
  return {min_rank == 5,
          fmt::format("min rank {} over {} points (need 5), min sigma5/sigma1 "
                      "{:.3g} (tol 1e-8)",
                      min_rank, points, min_ratio)};
}

// Worst pattern violation, relative to the principal coefficient.
double PatternViolation(const SwimmerModel& model) {
  const lie::BracketCoefficients x =
      lie::SolveBracketCoefficients(model, GroupDirection::kX);
  const lie::BracketCoefficients y =
      lie::SolveBracketCoefficients(model, GroupDirection::kY);
  const lie::BracketCoefficients t =
      lie::SolveBracketCoefficients(model, GroupDirection::kTheta);
  return std::max({std::abs(x.beta) / std::abs(x.alpha),
                   std::abs(x.gamma) / std::abs(x.alpha),
                   std::abs(y.alpha) / std::abs(y.beta),
                   std::abs(y.beta + y.gamma) / std::abs(y.beta),
                   std::abs(t.alpha) / std::abs(t.beta),
                   std::abs(t.beta - t.gamma) / std::abs(t.beta)});
}

Outcome CoefficientPattern(Rng& rng) {
  double worst = PatternViolation(DefaultModel());
  for (int k = 0; k < 20; ++k) {
    SwimmerParams p;
    p.half_length = rng.Uniform(0.01, 0.2);
    p.radius = p.half_length * rng.Uniform(0.01, 0.5);
    p.viscosity = rng.Uniform(0.05, 5.0);
    p = model::DeriveDragCoefficients(p);
    if (k % 2 == 1) {
      // Anisotropy other than the slender-body factor 2.
      p.k_lat = p.k_long * rng.Uniform(1.1, 4.0);
      p.source = model::DragSource::kMeasuredForces;
    }
    worst = std::max(worst, PatternViolation(SwimmerModel(p)));
  }
  return {worst < 1e-6,
          fmt::format("worst relative violation {:.3g} over 21 parameter sets "
                      "(need < 1e-6)",
                      worst)};
}

std::array<Configuration, 2> ProbePoints() {
  return {Configuration{},
          Configuration{{0.4, -0.3}, {0.1, -0.2, 0.7}}};
}

Eigen::Vector3d BodyBracket(const SwimmerModel& model, const Configuration& p) {
  const model::TangentVector5 z = lie::BracketBasis(model, p)[2];
  return geometry::BodyRate(p.pose, z.tail<3>()).AsVector();
}

Outcome CommutatorConvergence(Rng&) {
  const SwimmerModel& model = DefaultModel();
  const sim::ControlFields fields = sim::SwimmerFields(model);
  double min_slope = std::numeric_limits<double>::infinity();
  for (const Configuration& p : ProbePoints()) {
    const Eigen::Vector3d z = BodyBracket(model, p);
    for (int variant = 0; variant < 4; ++variant) {
      const sim::ConvergenceResult r = sim::ConvergenceProbe(
          kEpsLadder, [&](double eps) {
            return (sim::SquareGaitDisplacement(fields, eps, p, variant) -
                    eps * eps * z)
                .norm();
          });
      min_slope = std::min(min_slope, r.slope);
    }
  }
  return {min_slope >= kMinSlope,
          fmt::format("min log-log slope {:.3f} over 2 points x 4 variants "
                      "(need >= {})",
                      min_slope, kMinSlope)};
}

Outcome VariantEquivalence(Rng&) {
  const SwimmerModel& model = DefaultModel();
  const sim::ControlFields fields = sim::SwimmerFields(model);
  double min_slope = std::numeric_limits<double>::infinity();
  for (const Configuration& p : ProbePoints()) {
    std::array<std::array<Eigen::Vector3d, 4>, kEpsLadder.size()> delta;
    for (std::size_t e = 0; e < kEpsLadder.size(); ++e) {
      for (int v = 0; v < 4; ++v) {
        delta[e][v] = sim::SquareGaitDisplacement(fields, kEpsLadder[e], p, v);
      }
    }
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        const sim::ConvergenceResult r =
            sim::ConvergenceProbe(kEpsLadder, [&](double eps) {
              const auto it =
                  std::find(kEpsLadder.begin(), kEpsLadder.end(), eps);
              const auto e = static_cast<std::size_t>(it - kEpsLadder.begin());
              return (delta[e][a] - delta[e][b]).norm();
            });
        min_slope = std::min(min_slope, r.slope);
      }
    }
  }
  return {min_slope >= kMinSlope,
          fmt::format("min pairwise-difference slope {:.3f} over 2 points x 6 "
                      "pairs (need >= {})",
                      min_slope, kMinSlope)};
}

Outcome LeakageDecay(Rng&) {
  const SwimmerModel& model = DefaultModel();
  const lie::BracketCoefficients c =
      planner::NormalizedCoefficients(model, GroupDirection::kX);
  std::vector<double> ratios;
  std::string table;
  for (int n : {1, 2, 4}) {
    const gait::ControlSchedule s =
        gait::Synthesize({c, 1.0, n, gait::ExpansionForm::kRederived});
    const GroupPose d = sim::ComputeNetDisplacement(
                            sim::Simulate(s, Configuration{}, model))
                            .delta;
    ratios.push_back((std::abs(d.y) + std::abs(d.theta)) / std::abs(d.x));
    table += fmt::format("{}n={}: {:.4f}", table.empty() ? "" : ", ", n,
                         ratios.back());
  }
  const bool decreasing = ratios[1] < ratios[0] && ratios[2] < ratios[1];
  return {decreasing,
          fmt::format("(|dy|+|dtheta|)/|dx| at t=1: {} (need strictly "
                      "decreasing)",
                      table)};
}

Outcome IntegratorOrder(Rng& rng) {
  const SwimmerModel& model = DefaultModel();
  constexpr std::array<double, 4> kSteps = {0.05, 0.025, 0.0125, 0.00625};
  double min_order = std::numeric_limits<double>::infinity();
  double max_equivariance = 0.0;
  for (int k = 0; k < 10; ++k) {
    gait::ControlSchedule s;
    for (int i = 0; i < 6; ++i) {
      // Durations are multiples of the coarsest step, so every step size
      // divides each segment exactly.
      s.Append(rng.Int(1, 2), rng.Uniform(-1.0, 1.0), 0.2 * rng.Int(1, 3));
    }
    const ShapePoint shape{rng.Uniform(-1.0, 1.0), rng.Uniform(-1.0, 1.0)};
    const GroupPose g0 = rng.Pose();
    const Configuration q0{shape, g0};

    // Started at the identity so that roundoff stays far below the
    // truncation error at the finest step.
    auto final_pose = [&](double h) {
      sim::IntegratorConfig cfg;
      cfg.max_step = h;
      cfg.min_substeps = 1;
      cfg.sample_stride = 1000000;
      return sim::Simulate(s, {shape, GroupPose::Identity()}, model, cfg)
          .samples.back()
          .pose;
    };
    const GroupPose reference = final_pose(kSteps.back() / 16.0);
    const sim::ConvergenceResult r =
        sim::ConvergenceProbe(kSteps, [&](double h) {
          const GroupPose p = final_pose(h);
          return Eigen::Vector3d(p.x - reference.x, p.y - reference.y,
                                 geometry::WrapAngle(p.theta - reference.theta))
              .norm();
        });
    min_order = std::min(min_order, r.slope);

    sim::IntegratorConfig cfg;
    cfg.sample_stride = 1000000;
    const GroupPose from_identity =
        sim::Simulate(s, {shape, GroupPose::Identity()}, model, cfg)
            .samples.back()
            .pose;
    const GroupPose from_g0 = sim::Simulate(s, q0, model, cfg).samples.back().pose;
    max_equivariance =
        std::max(max_equivariance, geometry::PoseDistance(
                                       geometry::Compose(g0, from_identity),
                                       from_g0));
  }
  return {min_order >= 3.7 && max_equivariance < 1e-9,
          fmt::format("min observed order {:.3f} (need >= 3.7), max "
                      "equivariance residual {:.3g} (need < 1e-9)",
                      min_order, max_equivariance)};
}

Outcome ScheduleClosure(Rng&) {
  const SwimmerModel& model = DefaultModel();
  double max_travel = 0.0;
  double max_closure = 0.0;
  int count = 0;
  sim::IntegratorConfig cfg;
  cfg.sample_stride = 1000000;
  auto check = [&](const gait::ControlSchedule& s) {
    for (int channel : {1, 2}) {
      max_travel = std::max(max_travel, std::abs(gait::SignedTravel(s, channel)));
    }
    max_closure = std::max(
        max_closure,
        sim::ComputeNetDisplacement(sim::Simulate(s, Configuration{}, model, cfg))
            .shape_closure);
    ++count;
  };
  for (int d = 0; d < 3; ++d) {
    const auto direction = static_cast<GroupDirection>(d);
    const lie::BracketCoefficients c =
        planner::NormalizedCoefficients(model, direction);
    for (auto form : {gait::ExpansionForm::kLiteral, gait::ExpansionForm::kRederived}) {
      for (auto [t, n] : {std::pair{0.25, 1}, {1.0, 2}, {0.5, 3}, {1.0, 4}}) {
        const gait::GaitSpec spec{c, t, n, form};
        check(gait::Synthesize(spec));
        check(planner::BasisCycle(spec, direction, /*balanced=*/true));
      }
    }
  }
  return {max_travel < 1e-12 && max_closure < 1e-10,
          fmt::format("{} schedules: max signed travel {:.3g} (need < 1e-12), "
                      "max simulated shape closure {:.3g} (need < 1e-10)",
                      count, max_travel, max_closure)};
}

Outcome PolygonTracking(Rng&) {
  const SwimmerModel& model = DefaultModel();
  const io::RunConfig config = io::DefaultConfig();
  constexpr double kRadius = 0.2;
  const planner::CalibrationTable calib =
      planner::Calibrate(model, io::ResolveGaitSpecs(config, model),
                         config.integrator, config.balanced);
  const planner::PolygonPlan plan = planner::PlanPolygon({0.0, 0.0}, kRadius, 10);
  const planner::CompiledPlan compiled = planner::Compile(plan.maneuvers, calib);
  sim::IntegratorConfig cfg = config.integrator;
  cfg.sample_stride = 1000;
  const sim::Trajectory traj =
      sim::Simulate(compiled.schedule, {{}, plan.start}, model, cfg);
  const std::vector<Eigen::Vector2d> arrivals =
      planner::ArrivalPoints(traj, compiled);
  const planner::TrackingReport report =
      planner::MakeTrackingReport(plan.path, arrivals, /*fit_circle=*/true);
  const GroupPose end = traj.samples.back().pose;
  const double closure =
      std::hypot(end.x - plan.start.x, end.y - plan.start.y);
  const double circumference = 2.0 * kPi * kRadius;
  const double radius_error = std::abs(report.best_fit->radius - kRadius) / kRadius;
  return {radius_error < 0.15 && closure < 0.25 * circumference,
          fmt::format("best-fit radius {:.4f} m ({:.1f}% off, need < 15%), "
                      "closure {:.4f} m = {:.1f}% of circumference (need < "
                      "25%), {} segments",
                      report.best_fit->radius, 100.0 * radius_error, closure,
                      100.0 * closure / circumference,
                      compiled.schedule.size())};
}

Outcome LinePlanning(Rng&) {
  const double bearing = 154.0 * kPi / 180.0;
  const std::vector<planner::Maneuver> m = planner::PlanLine(
      GroupPose::Identity(),
      0.12 * Eigen::Vector2d(std::cos(bearing), std::sin(bearing)));
  const double rotation_deg = std::abs(m.at(0).magnitude) * 180.0 / kPi;
  const bool ok = m.size() == 2 &&
                  m[0].kind == planner::Maneuver::Kind::kRotate &&
                  m[1].kind == planner::Maneuver::Kind::kTranslate &&
                  std::abs(rotation_deg - 26.0) < 1e-9 &&
                  std::abs(std::abs(m[1].magnitude) - 0.12) < 1e-12;
  return {ok, fmt::format("rotation {:.12f} deg (need 26), translation {:.6f} m",
                          m.at(0).magnitude * 180.0 / kPi, m.at(1).magnitude)};
}

Outcome OracleEquivalence(Rng& rng) {
  const SwimmerModel& model = DefaultModel();
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ShapePoint shape{rng.Uniform(-kPi, kPi), rng.Uniform(-kPi, kPi)};
    const model::ShapeVelocity rate{rng.Uniform(-1.0, 1.0),
                                    rng.Uniform(-1.0, 1.0)};
    const Eigen::Vector3d expected =
        OracleBodyVelocity(model.params(), shape, rate);
    const Eigen::Vector3d actual = model.body_velocity(shape, rate).AsVector();
    worst = std::max(worst, (expected - actual).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-8,
          fmt::format("max |xi - xi_oracle| {:.3g} over 100 pairs (need < 1e-8)",
                      worst)};
}

Outcome LongHorizon(Rng&) {
  const SwimmerModel& model = DefaultModel();
  sim::IntegratorConfig cfg;
  cfg.sample_stride = 1000;
  gait::ControlSchedule s;
  // 5e5 steps per segment at h = 1e-3.
  s.Append(1, 1.0, 500.0);
  s.Append(2, -0.7, 500.0);
  const sim::Trajectory traj =
      sim::Simulate(s, {{0.3, -0.2}, GroupPose::Identity()}, model, cfg);
  bool finite = true;
  bool on_torus = true;
  for (const sim::TrajectorySample& x : traj.samples) {
    for (double v : {x.time, x.shape.alpha1, x.shape.alpha2, x.pose.x, x.pose.y,
                     x.pose.theta, x.body_velocity.xi_x, x.body_velocity.xi_y,
                     x.body_velocity.xi_theta}) {
      finite = finite && std::isfinite(v);
    }
    for (double a : {x.shape.alpha1, x.shape.alpha2}) {
      on_torus = on_torus && a > -kPi && a <= kPi;
    }
  }
  return {finite && on_torus,
          fmt::format("1e6 steps, {} samples kept: finite {}, shape on torus {}",
                      traj.samples.size(), finite, on_torus)};
}

struct Criterion {
  const char* name;
  double time_limit;
  Outcome (*run)(Rng&);
};

constexpr std::array<Criterion, kCriterionCount> kCriteria = {{
    {"controllability rank", 10.0, ControllabilityRank},
    {"coefficient zero/sign pattern", 0.0, CoefficientPattern},
    {"commutator convergence", 30.0, CommutatorConvergence},
    {"gait-variant equivalence", 0.0, VariantEquivalence},
    {"leakage decay", 120.0, LeakageDecay},
    {"integrator self-convergence", 0.0, IntegratorOrder},
    {"schedule closure", 0.0, ScheduleClosure},
    {"polygon tracking", 300.0, PolygonTracking},
    {"line planning", 0.0, LinePlanning},
    {"oracle equivalence", 0.0, OracleEquivalence},
    {"long-horizon boundedness", 0.0, LongHorizon},
}};

}  // namespace

std::string CriterionResult::Line() const {
  std::string timing = fmt::format("{:.2f} s", seconds);
  if (time_limit > 0.0) timing += fmt::format(", limit {:.0f} s", time_limit);
  return fmt::format("[{}] {:>2} {}: {} ({})", passed ? "PASS" : "FAIL", id,
                     name, detail, timing);
}

CriterionResult RunCriterion(int id, std::uint64_t seed) {
  if (id < 1 || id > kCriterionCount) {
    throw std::out_of_range(fmt::format("no acceptance criterion {}", id));
  }
  const Criterion& c = kCriteria[id - 1];
  CriterionResult result;
  result.id = id;
  result.name = c.name;
  result.time_limit = c.time_limit;
  // Each criterion draws from its own stream so subsets reproduce.
  Rng rng(seed + static_cast<std::uint64_t>(id));
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = c.run(rng);
    result.passed = o.passed;
    result.detail = o.detail;
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = fmt::format("threw: {}", e.what());
  }
  result.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  if (c.time_limit > 0.0 && result.seconds > c.time_limit) {
    result.passed = false;
    result.detail += " [over time limit]";
  }
  return result;
}

std::vector<CriterionResult> RunSuite(const SuiteOptions& options) {
  std::vector<int> ids = options.only;
  if (ids.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  }
  std::vector<CriterionResult> results;
  for (int id : ids) {
    results.push_back(RunCriterion(id, options.seed));
    if (options.on_result) options.on_result(results.back());
  }
  return results;
}

}  // namespace acceptance
}  // namespace purcell
