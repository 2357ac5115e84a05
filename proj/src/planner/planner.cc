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

#include "purcell/planner/planner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "purcell/common/errors.h"

namespace purcell {
namespace planner {

using geometry::WrapAngle;
using lie::GroupDirection;

namespace {

constexpr double kClosureTolerance = 1e-9;

double DominanceRatio(GroupDirection direction, const GroupPose& d,
                      double length) {
  const double x = std::abs(d.x);
  const double y = std::abs(d.y);
  const double th = std::abs(d.theta) * length;
  double principal = 0.0;
  double cross = 0.0;
  switch (direction) {
    case GroupDirection::kX:
      principal = x;
      cross = std::max(y, th);
      break;
    case GroupDirection::kY:
      principal = y;
      cross = std::max(x, th);
      break;
    case GroupDirection::kTheta:
      principal = th;
      cross = std::max(x, y);
      break;
  }
  if (cross == 0.0) {
    return principal > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return principal / cross;
}

double PerCycleAmount(const GaitCalibration& gait, Maneuver::Kind kind) {
  return kind == Maneuver::Kind::kRotate ? gait.per_cycle.theta
                                         : gait.per_cycle.x;
}

}  // namespace

lie::BracketCoefficients NormalizedCoefficients(const model::SwimmerModel& model,
                                                GroupDirection direction) {
  const lie::BracketCoefficients c =
      lie::SolveBracketCoefficients(model, direction);
  const double scale =
      std::max({std::abs(c.alpha), std::abs(c.beta), std::abs(c.gamma)});
  // Entries that the mirror symmetry forces to zero come out at roundoff
  // level; snap them so the synthesizer elides their blocks.
  auto snap = [scale](double v) {
    const double r = v / scale;
    return std::abs(r) < 1e-9 ? 0.0 : r;
  };
  return {snap(c.alpha), snap(c.beta), snap(c.gamma)};
}

gait::ControlSchedule BasisCycle(const gait::GaitSpec& spec,
                                 GroupDirection direction, bool balanced) {
  gait::ControlSchedule cycle = gait::Synthesize(spec);
  if (!balanced) return cycle;
  // x: (x, -y, -theta); y: (-x, y, -theta); theta: (-x, -y, theta).
  const bool swap = direction != GroupDirection::kX;
  const bool negate = direction != GroupDirection::kY;
  const std::array<gait::ControlSchedule, 2> pair = {
      cycle, gait::Reflect(cycle, swap, negate)};
  gait::ControlSchedule out = gait::Concatenate(pair);
  out.source = spec;
  return out;
}

CalibrationTable Calibrate(const model::SwimmerModel& model,
                           const std::array<gait::GaitSpec, 3>& specs,
                           const sim::IntegratorConfig& cfg, bool balanced) {
  CalibrationTable table;
  table.characteristic_length = 2.0 * model.params().half_length;
  for (int i = 0; i < 3; ++i) {
    const auto direction = static_cast<GroupDirection>(i);
    GaitCalibration& out = table.gaits[i];
    out.spec = specs[i];
    out.cycle = BasisCycle(specs[i], direction, balanced);
    for (int channel : {1, 2}) {
      if (std::abs(gait::SignedTravel(out.cycle, channel)) >
          kClosureTolerance) {
        throw ValidationError(fmt::format(
            "{} gait is not a closed shape loop", lie::DirectionName(direction)));
      }
    }
    const sim::NetDisplacement net = sim::ComputeNetDisplacement(
        sim::Simulate(out.cycle, model::Configuration{}, model, cfg));
    out.per_cycle = net.delta;
    out.cycle_duration = out.cycle.total_duration();
    out.dominance_ratio =
        DominanceRatio(direction, net.delta, table.characteristic_length);
    if (!(out.dominance_ratio >= kMinDominanceRatio)) {
      throw ValidationError(fmt::format(
          "{} gait is unusable: dominance ratio {:.3f} < {} (per cycle "
          "dx={:.3e} dy={:.3e} dtheta={:.3e})",
          lie::DirectionName(direction), out.dominance_ratio,
          kMinDominanceRatio, net.delta.x, net.delta.y, net.delta.theta));
    }
  }
  return table;
}

std::vector<Maneuver> PlanLine(const GroupPose& start,
                               const Eigen::Vector2d& target) {
  const Eigen::Vector2d delta = target - Eigen::Vector2d(start.x, start.y);
  const double distance = delta.norm();
  if (!(distance > 0.0)) {
    throw ValidationError("line target coincides with the start position");
  }
  const double bearing = std::atan2(delta.y(), delta.x());
  double turn = WrapAngle(bearing - start.theta);
  double travel = distance;
  if (std::abs(turn) > std::numbers::pi / 2.0) {
    turn = WrapAngle(turn - std::numbers::pi);
    travel = -distance;
  }
  return {Maneuver::Rotate(turn), Maneuver::Translate(travel)};
}

PolygonPlan PlanPolygon(const Eigen::Vector2d& center, double radius,
                        int sides) {
  if (sides < 3) {
    throw ValidationError(fmt::format("polygon needs >= 3 sides, got {}", sides));
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError(fmt::format("polygon radius must be > 0, got {}", radius));
  }
  constexpr double kPi = std::numbers::pi;
  PolygonPlan plan;
  plan.exterior_turn = 2.0 * kPi / sides;
  plan.side_length = 2.0 * radius * std::sin(kPi / sides);
  for (int k = 0; k <= sides; ++k) {
    const double phi = (k % sides) * plan.exterior_turn;
    plan.path.points.push_back(center +
                               radius * Eigen::Vector2d(std::cos(phi), std::sin(phi)));
  }
  // Side k leaves vertex k with heading phi_k + pi/2 + pi/sides.
  plan.start = {plan.path.points[0].x(), plan.path.points[0].y(),
                WrapAngle(kPi / 2.0 + kPi / sides - plan.exterior_turn)};
  for (int k = 0; k < sides; ++k) {
    plan.maneuvers.push_back(Maneuver::Rotate(plan.exterior_turn));
    plan.maneuvers.push_back(Maneuver::Translate(plan.side_length));
  }
  return plan;
}

CompiledPlan Compile(const std::vector<Maneuver>& maneuvers,
                     const CalibrationTable& calib) {
  CompiledPlan plan;
  for (std::size_t i = 0; i < maneuvers.size(); ++i) {
    const Maneuver& m = maneuvers[i];
    if (!std::isfinite(m.magnitude)) {
      throw ValidationError(fmt::format("maneuver {} is not finite", i));
    }
    const GaitCalibration& g = m.kind == Maneuver::Kind::kRotate
                                   ? calib[GroupDirection::kTheta]
                                   : calib[GroupDirection::kX];
    const double per_cycle = PerCycleAmount(g, m.kind);
    if (!(std::abs(per_cycle) > 0.0)) {
      throw ValidationError("calibrated gait has zero per-cycle displacement");
    }
    const int reps =
        static_cast<int>(std::lround(std::abs(m.magnitude / per_cycle)));
    const bool forward = (m.magnitude >= 0.0) == (per_cycle > 0.0);
    const double executed = reps * std::abs(per_cycle) *
                            (m.magnitude >= 0.0 ? 1.0 : -1.0);
    if (reps > 0) {
      const gait::ControlSchedule cycle =
          forward ? g.cycle : gait::Reverse(g.cycle);
      const gait::ControlSchedule block = gait::Repeat(cycle, reps);
      plan.schedule.segments.insert(plan.schedule.segments.end(),
                                    block.segments.begin(),
                                    block.segments.end());
    } else if (m.magnitude != 0.0) {
      plan.warnings.push_back(fmt::format(
          "maneuver {} ({} {:.6g}) is below half a cycle ({:.6g}); skipped", i,
          m.kind == Maneuver::Kind::kRotate ? "rotate" : "translate",
          m.magnitude, std::abs(per_cycle)));
    }
    plan.repetitions.push_back(reps);
    plan.schedule.maneuver_residuals.push_back(m.magnitude - executed);
    plan.maneuver_ends.push_back(plan.schedule.segments.size());
  }
  return plan;
}

std::vector<Eigen::Vector2d> ArrivalPoints(const sim::Trajectory& trajectory,
                                           const CompiledPlan& plan,
                                           int stride) {
  if (trajectory.samples.empty()) {
    throw ValidationError("arrival points of an empty trajectory");
  }
  if (stride < 1) throw ValidationError("arrival stride must be >= 1");
  const auto& samples = trajectory.samples;
  std::vector<Eigen::Vector2d> points;
  points.emplace_back(samples.front().pose.x, samples.front().pose.y);
  for (std::size_t i = stride - 1; i < plan.maneuver_ends.size();
       i += stride) {
    const std::size_t end = plan.maneuver_ends[i];
    // Last sample of segment end - 1; samples after the first are ordered by
    // segment index.
    std::size_t pick = 0;
    if (end > 0) {
      const auto it = std::upper_bound(
          samples.begin() + 1, samples.end(), static_cast<int>(end - 1),
          [](int seg, const sim::TrajectorySample& s) { return seg < s.segment; });
      pick = static_cast<std::size_t>(it - samples.begin()) - 1;
    }
    points.emplace_back(samples[pick].pose.x, samples[pick].pose.y);
  }
  return points;
}

Circle FitCircle(const std::vector<Eigen::Vector2d>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw NumericalError("circle fit needs at least 3 points");
  // Algebraic fit: x^2 + y^2 + D x + E y + F = 0.
  Eigen::MatrixXd M(n, 3);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    M(i, 0) = points[i].x();
    M(i, 1) = points[i].y();
    M(i, 2) = 1.0;
    rhs(i) = -points[i].squaredNorm();
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  if (qr.rank() < 3) {
    throw NumericalError("circle fit: points are collinear or coincident");
  }
  const Eigen::Vector3d def = qr.solve(rhs);
  Circle c;
  c.center = -0.5 * def.head<2>();
  const double r2 = c.center.squaredNorm() - def(2);
  if (!(r2 > 0.0)) throw NumericalError("circle fit: degenerate radius");
  c.radius = std::sqrt(r2);

  // Gauss-Newton on r_i = |p_i - c| - R.
  for (int iter = 0; iter < 20; ++iter) {
    Eigen::MatrixXd J(n, 3);
    Eigen::VectorXd res(n);
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d d = points[i] - c.center;
      const double dist = d.norm();
      if (dist == 0.0) throw NumericalError("circle fit: point at center");
      res(i) = dist - c.radius;
      J(i, 0) = -d.x() / dist;
      J(i, 1) = -d.y() / dist;
      J(i, 2) = -1.0;
    }
    const Eigen::Vector3d step = J.colPivHouseholderQr().solve(-res);
    c.center += step.head<2>();
    c.radius += step(2);
    if (step.norm() < 1e-15 * (1.0 + c.radius)) break;
  }
  return c;
}

TrackingReport MakeTrackingReport(const WaypointPath& planned,
                                  const std::vector<Eigen::Vector2d>& realized,
                                  bool fit_circle) {
  if (planned.points.size() != realized.size()) {
    throw ValidationError(fmt::format(
        "tracking report: {} planned waypoints but {} realized points",
        planned.points.size(), realized.size()));
  }
  TrackingReport report;
  double sum = 0.0;
  for (std::size_t i = 0; i < realized.size(); ++i) {
    const double e = (planned.points[i] - realized[i]).norm();
    report.waypoint_errors.push_back(e);
    report.max_error = std::max(report.max_error, e);
    sum += e;
  }
  if (!realized.empty()) report.mean_error = sum / realized.size();
  if (fit_circle && realized.size() >= 3) report.best_fit = FitCircle(realized);
  return report;
}

}  // namespace planner
}  // namespace purcell
