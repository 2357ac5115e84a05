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

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "purcell/lie/lie_toolkit.h"

namespace purcell {
namespace gait {

/// One piecewise-constant primitive: joint `channel` (1 or 2) is driven at
/// rate `amplitude` (rad/s) for `duration` seconds while the other joint is
/// held.
struct ControlSegment {
  int channel{1};
  double amplitude{0.0};
  double duration{0.0};

  bool operator==(const ControlSegment&) const = default;
};

/// How the nested time arguments of the bracket-combination expansion are
/// chosen.
enum class ExpansionForm {
  /// Inner squares of side t^(1/4) / n and middle segments sqrt(t) / n, each
  /// conjugation block raised to the n-th power, exactly as the expansion is
  /// usually displayed.
  kLiteral,
  /// Each second-order term realized as the commutator of the scaled field
  /// with an n-square approximation of [g1, g2] (and its reverse), sides
  /// chosen so that every round contributes (t / n) times the target field.
  kRederived,
};

const char* FormName(ExpansionForm form);

struct GaitSpec {
  lie::BracketCoefficients coefficients;
  double t{1.0};
  int n{1};
  ExpansionForm form{ExpansionForm::kLiteral};
};

/// Executable gait. Segments run in list order: the first element is applied
/// first.
struct ControlSchedule {
  std::vector<ControlSegment> segments;
  /// Spec that generated the schedule, when there is a single one.
  std::optional<GaitSpec> source;
  /// Per-maneuver rounding residuals written by the planner's compiler
  /// (units of the maneuver: rad or m).
  std::vector<double> maneuver_residuals;

  double total_duration() const;
  std::size_t size() const { return segments.size(); }
  bool empty() const { return segments.empty(); }

  /// Appends a segment unless its amplitude or duration is zero.
  void Append(int channel, double amplitude, double duration);
};

/// Time integral of `channel`'s rate over the schedule (net joint travel).
double SignedTravel(const ControlSchedule& schedule, int channel);

/// Four-segment square gait [+A, +B, -A, -B] with segment duration sqrt(tau),
/// rotated cyclically left by `variant` (0..3) positions. Channels are signed
/// (+-1, +-2); the A segments are scaled by `scale_a`.
ControlSchedule CommutatorSchedule(int channel_a, int channel_b, double tau,
                                   double scale_a = 1.0, int variant = 0);

/// Flattens the n-round expansion of the flow along
/// alpha [g1,g2] + beta [g1,[g1,g2]] + gamma [g2,[g1,g2]] for time t into
/// primitive segments. Zero-coefficient terms are dropped.
/// Throws ValidationError for n < 1, t <= 0 or non-finite coefficients.
ControlSchedule Synthesize(const GaitSpec& spec);

ControlSchedule Concatenate(std::span<const ControlSchedule> schedules);

/// k back-to-back copies; throws ValidationError for k < 1.
ControlSchedule Repeat(const ControlSchedule& schedule, int k);

/// Runs the schedule backwards with negated rates; the exact inverse flow of
/// a driftless system.
ControlSchedule Reverse(const ControlSchedule& schedule);

/// Mirror image of a schedule under a reflection of the swimmer.
/// `swap_channels` exchanges the joints (reflection across the body y axis,
/// net body displacement (x, y, theta) -> (-x, y, -theta) from a symmetric
/// start shape); `negate` flips every rate (reflection across the body x
/// axis, (x, y, theta) -> (x, -y, -theta)).
ControlSchedule Reflect(const ControlSchedule& schedule, bool swap_channels,
                        bool negate);

struct ShapeExcursion {
  double alpha1{0.0};
  double alpha2{0.0};

  double max() const { return alpha1 > alpha2 ? alpha1 : alpha2; }
};

/// Largest |alpha_i| reached when the schedule is run from the straight
/// shape. Shape is piecewise linear, so the extremes sit on segment ends.
ShapeExcursion ComputeShapeExcursion(const ControlSchedule& schedule);

/// Plain-text schedule: one `channel amplitude duration` line per segment,
/// `#` starts a comment.
void WriteSchedule(std::ostream& out, const ControlSchedule& schedule);

/// Throws ValidationError with a line number on malformed input.
ControlSchedule ReadSchedule(std::istream& in);

}  // namespace gait
}  // namespace purcell
