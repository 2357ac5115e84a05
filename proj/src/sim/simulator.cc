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

#include "purcell/sim/simulator.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "purcell/common/errors.h"

namespace purcell {
namespace sim {

using geometry::WrapAngle;
using geometry::WorldRate;

void ValidateIntegratorConfig(const IntegratorConfig& cfg) {
  if (!(cfg.max_step > 0.0) || !std::isfinite(cfg.max_step)) {
    throw ValidationError(
        fmt::format("integrator max_step must be > 0, got {}", cfg.max_step));
  }
  if (cfg.min_substeps < 1) {
    throw ValidationError(fmt::format(
        "integrator min_substeps must be >= 1, got {}", cfg.min_substeps));
  }
  if (cfg.sample_stride < 1) {
    throw ValidationError(fmt::format(
        "integrator sample_stride must be >= 1, got {}", cfg.sample_stride));
  }
}

ControlFields SwimmerFields(const model::SwimmerModel& model) {
  return [model](int channel, const ShapePoint& shape) -> Eigen::Vector3d {
    return -model.connection(shape).A.col(channel - 1);
  };
}

Trajectory Simulate(const gait::ControlSchedule& schedule,
                    const Configuration& q0, const model::SwimmerModel& model,
                    const IntegratorConfig& cfg) {
  return Simulate(schedule, q0, SwimmerFields(model), cfg);
}

Trajectory Simulate(const gait::ControlSchedule& schedule,
                    const Configuration& q0, const ControlFields& fields,
                    const IntegratorConfig& cfg) {
  ValidateIntegratorConfig(cfg);
  Trajectory traj;
  TrajectorySample first;
  first.shape = ShapePoint::Wrapped(q0.shape.alpha1, q0.shape.alpha2);
  first.pose = {q0.pose.x, q0.pose.y, WrapAngle(q0.pose.theta)};
  if (!schedule.empty()) {
    const gait::ControlSegment& s = schedule.segments.front();
    first.body_velocity = BodyVelocity::FromVector(
        s.amplitude * fields(s.channel, first.shape));
  } else {
    traj.warnings.push_back("empty schedule: trajectory holds q0 only");
  }
  traj.samples.push_back(first);

  // Unwrapped running state.
  double a1 = q0.shape.alpha1;
  double a2 = q0.shape.alpha2;
  Eigen::Vector3d pose = q0.pose.AsVector();
  double time = 0.0;
  long long step_counter = 0;

  for (std::size_t index = 0; index < schedule.segments.size(); ++index) {
    const gait::ControlSegment& seg = schedule.segments[index];
    if (seg.channel != 1 && seg.channel != 2) {
      throw ValidationError(fmt::format(
          "segment {} has channel {}; expected 1 or 2", index, seg.channel));
    }
    const int steps = std::max(
        static_cast<int>(std::ceil(seg.duration / cfg.max_step)),
        cfg.min_substeps);
    const double h = seg.duration / steps;
    const double a1_start = a1;
    const double a2_start = a2;
    const double rate1 = seg.channel == 1 ? seg.amplitude : 0.0;
    const double rate2 = seg.channel == 2 ? seg.amplitude : 0.0;

    auto shape_at = [&](double tau) {
      return ShapePoint::Wrapped(a1_start + rate1 * tau,
                                 a2_start + rate2 * tau);
    };
    auto body_at = [&](double tau) {
      return BodyVelocity::FromVector(seg.amplitude *
                                      fields(seg.channel, shape_at(tau)));
    };
    auto rhs = [&](double tau, const Eigen::Vector3d& state) {
      return WorldRate({state(0), state(1), state(2)}, body_at(tau));
    };

    for (int k = 0; k < steps; ++k) {
      const double tau = k * h;
      const Eigen::Vector3d k1 = rhs(tau, pose);
      const Eigen::Vector3d k2 = rhs(tau + 0.5 * h, pose + 0.5 * h * k1);
      const Eigen::Vector3d k3 = rhs(tau + 0.5 * h, pose + 0.5 * h * k2);
      const Eigen::Vector3d k4 = rhs(tau + h, pose + h * k3);
      pose += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      pose(2) = WrapAngle(pose(2));
      if (!pose.allFinite()) {
        throw NumericalError(fmt::format(
            "pose became non-finite in segment {} at t = {}", index,
            time + tau + h));
      }
      ++step_counter;
      const bool last = k + 1 == steps;
      if (last || step_counter % cfg.sample_stride == 0) {
        const double tau_end = last ? seg.duration : tau + h;
        TrajectorySample sample;
        sample.time = time + tau_end;
        sample.shape = shape_at(tau_end);
        sample.pose = {pose(0), pose(1), pose(2)};
        sample.body_velocity = body_at(tau_end);
        sample.segment = static_cast<int>(index);
        traj.samples.push_back(sample);
      }
    }
    a1 = a1_start + rate1 * seg.duration;
    a2 = a2_start + rate2 * seg.duration;
    // Keep the running angles bounded over long horizons.
    a1 = WrapAngle(a1);
    a2 = WrapAngle(a2);
    time += seg.duration;
  }
  return traj;
}

NetDisplacement ComputeNetDisplacement(const Trajectory& trajectory) {
  if (trajectory.samples.empty()) {
    throw ValidationError("net displacement of an empty trajectory");
  }
  const TrajectorySample& a = trajectory.samples.front();
  const TrajectorySample& b = trajectory.samples.back();
  return {geometry::Compose(geometry::Inverse(a.pose), b.pose),
          model::TorusDistance(a.shape, b.shape)};
}

ConvergenceResult ConvergenceProbe(
    std::span<const double> ladder,
    const std::function<double(double)>& error_at) {
  if (ladder.size() < 3) {
    throw ValidationError(fmt::format(
        "convergence probe needs at least 3 ladder points, got {}",
        ladder.size()));
  }
  ConvergenceResult result;
  for (double p : ladder) {
    if (!(p > 0.0)) {
      throw ValidationError(
          fmt::format("ladder parameters must be > 0, got {}", p));
    }
    result.table.push_back({p, error_at(p)});
  }

  std::vector<ConvergenceRow> sorted = result.table;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& l, const auto& r) { return l.parameter > r.parameter; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].error > sorted[i - 1].error) {
      result.monotone = false;
      result.diagnostic = fmt::format(
          "error grows from {:.3e} to {:.3e} as the parameter shrinks from "
          "{} to {}",
          sorted[i - 1].error, sorted[i].error, sorted[i - 1].parameter,
          sorted[i].parameter);
      break;
    }
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (const ConvergenceRow& row : result.table) {
    if (!(row.error > 0.0)) continue;
    const double lx = std::log(row.parameter);
    const double ly = std::log(row.error);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) {
    result.slope = std::numeric_limits<double>::infinity();
    if (result.diagnostic.empty()) {
      result.diagnostic = "errors vanish on the ladder";
    }
    return result;
  }
  result.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return result;
}

Eigen::Vector3d SquareGaitDisplacement(const ControlFields& fields,
                                       double eps, const Configuration& p,
                                       int variant,
                                       const IntegratorConfig& cfg) {
  const gait::ControlSchedule square =
      gait::CommutatorSchedule(1, 2, eps * eps, 1.0, variant);
  const NetDisplacement net =
      ComputeNetDisplacement(Simulate(square, p, fields, cfg));
  return net.delta.AsVector();
}

}  // namespace sim
}  // namespace purcell
