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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "purcell/gait/schedule.h"
#include "purcell/model/swimmer.h"
#include "purcell/sim/simulator.h"

namespace purcell {
namespace io {

/// Per-direction gait settings. Coefficients left unset are solved at the
/// straight shape and normalized (see planner::NormalizedCoefficients); if
/// any one is set, the unset ones are zero.
struct GaitSettings {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  double t{0.25};
  int n{4};

  bool HasCoefficients() const { return alpha || beta || gamma; }
};

struct LineTask {
  geometry::GroupPose start;
  double length{0.12};
  /// World-frame bearing of the target from the start position.
  double bearing{0.0};
};

struct CircleTask {
  Eigen::Vector2d center{0.0, 0.0};
  double radius{0.2};
  int sides{10};
};

struct RunConfig {
  /// Validated, with drag coefficients filled in.
  model::SwimmerParams params{model::SwimmerParams::Default()};
  /// Raw measured-force inputs, used when params.source is kMeasuredForces.
  double normal_force{0.005922};
  double tangential_force{0.0001013};
  std::optional<double> calibration_velocity;

  sim::IntegratorConfig integrator;

  gait::ExpansionForm form{gait::ExpansionForm::kRederived};
  /// Indexed by lie::GroupDirection.
  std::array<GaitSettings, 3> gaits;
  /// Follow each planner cycle by its leakage-cancelling reflection.
  bool balanced{true};

  LineTask line;
  CircleTask circle;

  int analyze_grid{12};
  double analyze_tol{1e-8};
  std::vector<double> probe_ladder{0.2, 0.1, 0.05, 0.025};

  std::string output_dir{"out"};
  std::uint64_t seed{1};
};

/// Defaults with x: t = 0.25, n = 4; y: t = 0.0625, n = 8;
/// theta: t = 0.25, n = 4.
RunConfig DefaultConfig();

/// Parses flat `key = value` lines. `#` starts a comment. Lengths accept
/// `m`, `cm`, `mm`; angles accept `rad`, `deg`; durations accept `s`, `ms`.
/// Unknown keys, repeated keys, malformed lines and out-of-range values throw
/// ValidationError naming the line; cross-field checks (slenderness, measured
/// drag inputs) name the offending key.
/// `overrides` are further `key = value` lines applied after the text; they
/// may replace keys set in the text and are reported as `override N`.
RunConfig ParseConfig(std::string_view text,
                      const std::vector<std::string>& overrides = {});

/// Reads and parses a file. The name "default" stands for an empty file.
RunConfig LoadConfig(const std::filesystem::path& path,
                     const std::vector<std::string>& overrides = {});

/// Canonical `key = value` listing of every setting, SI units, round-trips
/// through ParseConfig.
std::string EchoConfig(const RunConfig& config);

/// Gait specs for x, y, theta, solving coefficients where unset.
std::array<gait::GaitSpec, 3> ResolveGaitSpecs(const RunConfig& config,
                                               const model::SwimmerModel& model);

}  // namespace io
}  // namespace purcell
