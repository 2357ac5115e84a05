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

#include "purcell/gait/schedule.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "purcell/common/errors.h"

namespace purcell {
namespace gait {

namespace {

void CheckDuration(double duration, const char* what) {
  if (!std::isfinite(duration) || duration < 0.0) {
    throw ValidationError(
        fmt::format("synthesis produced an invalid {} duration {}", what,
                    duration));
  }
}

// Appends `count` copies of the square [+g1, +g2, -g1, -g2] (or its reverse
// [+g2, +g1, -g2, -g1]) with unit rates and the given side duration.
void AppendSquares(ControlSchedule& out, double side, int count,
                   bool reversed) {
  CheckDuration(side, "square side");
  const int first = reversed ? 2 : 1;
  const int second = reversed ? 1 : 2;
  for (int i = 0; i < count; ++i) {
    out.Append(first, 1.0, side);
    out.Append(second, 1.0, side);
    out.Append(first, -1.0, side);
    out.Append(second, -1.0, side);
  }
}

// Appends, in execution order, the cyclic shift of [-g1, -g2, +g1, +g2];
// a forward-oriented square started from the opposite corner.
void AppendShiftedSquares(ControlSchedule& out, double side, int count) {
  CheckDuration(side, "square side");
  for (int i = 0; i < count; ++i) {
    out.Append(1, -1.0, side);
    out.Append(2, -1.0, side);
    out.Append(1, 1.0, side);
    out.Append(2, 1.0, side);
  }
}

// Second-order term coefficient * [g_channel, [g1, g2]].
void AppendSecondOrderBlock(ControlSchedule& out, const GaitSpec& spec,
                            int channel, double coefficient) {
  if (coefficient == 0.0) return;
  const double t = spec.t;
  const double n = spec.n;
  if (spec.form == ExpansionForm::kLiteral) {
    // [(S')^n o Phi^{-c g}_{sqrt(t)/n} o (S)^n o Phi^{c g}_{sqrt(t)/n}]^n,
    // S the square g1, g2, -g1, -g2 and S' its shift from the opposite
    // corner, both with side sqrt(sqrt(t)) / n.
    const double middle = std::sqrt(t) / n;
    const double side = std::sqrt(std::sqrt(t)) / n;
    CheckDuration(middle, "middle segment");
    for (int k = 0; k < spec.n; ++k) {
      out.Append(channel, coefficient, middle);
      AppendSquares(out, side, spec.n, /*reversed=*/false);
      out.Append(channel, -coefficient, middle);
      AppendShiftedSquares(out, side, spec.n);
    }
  } else {
    // Commutator of c * g_channel with Z = [g1, g2] over time sqrt(t / n);
    // Z and -Z are each n squares whose areas add up to sqrt(t / n).
    const double middle = std::sqrt(t / n);
    const double side = std::sqrt(middle / n);
    CheckDuration(middle, "middle segment");
    out.Append(channel, coefficient, middle);
    AppendSquares(out, side, spec.n, /*reversed=*/false);
    out.Append(channel, -coefficient, middle);
    AppendSquares(out, side, spec.n, /*reversed=*/true);
  }
}

}  // namespace

const char* FormName(ExpansionForm form) {
  return form == ExpansionForm::kLiteral ? "literal" : "rederived";
}

double ControlSchedule::total_duration() const {
  double total = 0.0;
  for (const ControlSegment& s : segments) total += s.duration;
  return total;
}

void ControlSchedule::Append(int channel, double amplitude, double duration) {
  if (amplitude == 0.0 || duration == 0.0) return;
  segments.push_back({channel, amplitude, duration});
}

double SignedTravel(const ControlSchedule& schedule, int channel) {
  double travel = 0.0;
  for (const ControlSegment& s : schedule.segments) {
    if (s.channel == channel) travel += s.amplitude * s.duration;
  }
  return travel;
}

ControlSchedule CommutatorSchedule(int channel_a, int channel_b, double tau,
                                   double scale_a, int variant) {
  auto check_channel = [](int c) {
    if (c != 1 && c != -1 && c != 2 && c != -2) {
      throw ValidationError(fmt::format("signed channel must be +-1 or +-2, got {}", c));
    }
  };
  check_channel(channel_a);
  check_channel(channel_b);
  if (std::abs(channel_a) == std::abs(channel_b)) {
    throw ValidationError("commutator needs two different channels");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ValidationError(fmt::format("commutator time must be > 0, got {}", tau));
  }
  if (variant < 0 || variant > 3) {
    throw ValidationError(fmt::format("variant must be in 0..3, got {}", variant));
  }
  const double side = std::sqrt(tau);
  const double sign_a = channel_a > 0 ? 1.0 : -1.0;
  const double sign_b = channel_b > 0 ? 1.0 : -1.0;
  const std::array<ControlSegment, 4> square = {{
      {std::abs(channel_a), sign_a * scale_a, side},
      {std::abs(channel_b), sign_b, side},
      {std::abs(channel_a), -sign_a * scale_a, side},
      {std::abs(channel_b), -sign_b, side},
  }};
  ControlSchedule out;
  for (int i = 0; i < 4; ++i) {
    const ControlSegment& s = square[(i + variant) % 4];
    out.Append(s.channel, s.amplitude, s.duration);
  }
  return out;
}

ControlSchedule Synthesize(const GaitSpec& spec) {
  if (spec.n < 1) {
    throw ValidationError(fmt::format("gait n must be >= 1, got {}", spec.n));
  }
  if (!(spec.t > 0.0) || !std::isfinite(spec.t)) {
    throw ValidationError(fmt::format("gait t must be > 0, got {}", spec.t));
  }
  const lie::BracketCoefficients& c = spec.coefficients;
  if (!std::isfinite(c.alpha) || !std::isfinite(c.beta) ||
      !std::isfinite(c.gamma)) {
    throw ValidationError("gait coefficients must be finite");
  }

  ControlSchedule out;
  out.source = spec;
  const double first_order_side = std::sqrt(spec.t / spec.n);
  CheckDuration(first_order_side, "first-order side");
  // The expansion composes alpha-term o beta-term o gamma-term, so in
  // execution order the gamma block runs first in each round.
  for (int round = 0; round < spec.n; ++round) {
    AppendSecondOrderBlock(out, spec, 2, c.gamma);
    AppendSecondOrderBlock(out, spec, 1, c.beta);
    if (c.alpha != 0.0) {
      out.Append(1, c.alpha, first_order_side);
      out.Append(2, 1.0, first_order_side);
      out.Append(1, -c.alpha, first_order_side);
      out.Append(2, -1.0, first_order_side);
    }
  }
  return out;
}

ControlSchedule Concatenate(std::span<const ControlSchedule> schedules) {
  if (schedules.size() == 1) return schedules.front();
  ControlSchedule out;
  for (const ControlSchedule& s : schedules) {
    out.segments.insert(out.segments.end(), s.segments.begin(),
                        s.segments.end());
    out.maneuver_residuals.insert(out.maneuver_residuals.end(),
                                  s.maneuver_residuals.begin(),
                                  s.maneuver_residuals.end());
  }
  return out;
}

ControlSchedule Repeat(const ControlSchedule& schedule, int k) {
  if (k < 1) {
    throw ValidationError(fmt::format("repeat count must be >= 1, got {}", k));
  }
  ControlSchedule out;
  out.source = schedule.source;
  out.segments.reserve(schedule.segments.size() * k);
  for (int i = 0; i < k; ++i) {
    out.segments.insert(out.segments.end(), schedule.segments.begin(),
                        schedule.segments.end());
  }
  return out;
}

ControlSchedule Reverse(const ControlSchedule& schedule) {
  ControlSchedule out;
  out.segments.reserve(schedule.segments.size());
  for (auto it = schedule.segments.rbegin(); it != schedule.segments.rend();
       ++it) {
    out.segments.push_back({it->channel, -it->amplitude, it->duration});
  }
  return out;
}

ControlSchedule Reflect(const ControlSchedule& schedule, bool swap_channels,
                        bool negate) {
  ControlSchedule out;
  out.segments.reserve(schedule.segments.size());
  for (const ControlSegment& s : schedule.segments) {
    out.segments.push_back({swap_channels ? 3 - s.channel : s.channel,
                            negate ? -s.amplitude : s.amplitude, s.duration});
  }
  return out;
}

ShapeExcursion ComputeShapeExcursion(const ControlSchedule& schedule) {
  ShapeExcursion ex;
  double a1 = 0.0;
  double a2 = 0.0;
  for (const ControlSegment& s : schedule.segments) {
    double& a = s.channel == 1 ? a1 : a2;
    a += s.amplitude * s.duration;
    ex.alpha1 = std::max(ex.alpha1, std::abs(a1));
    ex.alpha2 = std::max(ex.alpha2, std::abs(a2));
  }
  return ex;
}

void WriteSchedule(std::ostream& out, const ControlSchedule& schedule) {
  out << "# channel amplitude duration\n";
  if (schedule.source) {
    const GaitSpec& spec = *schedule.source;
    out << fmt::format("# alpha={:.17g} beta={:.17g} gamma={:.17g} t={:.17g} "
                       "n={} form={}\n",
                       spec.coefficients.alpha, spec.coefficients.beta,
                       spec.coefficients.gamma, spec.t, spec.n,
                       FormName(spec.form));
  }
  out << fmt::format("# segments={} total_duration={:.17g}\n", schedule.size(),
                     schedule.total_duration());
  for (const ControlSegment& s : schedule.segments) {
    out << fmt::format("{} {:.17g} {:.17g}\n", s.channel, s.amplitude,
                       s.duration);
  }
}

ControlSchedule ReadSchedule(std::istream& in) {
  ControlSchedule out;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string channel_text;
    if (!(fields >> channel_text)) continue;
    double amplitude = 0.0;
    double duration = 0.0;
    std::string extra;
    char* end = nullptr;
    const long channel = std::strtol(channel_text.c_str(), &end, 10);
    if (*end != '\0' || !(fields >> amplitude >> duration) ||
        (fields >> extra)) {
      throw ValidationError(fmt::format(
          "schedule line {}: expected `channel amplitude duration`",
          line_number));
    }
    if (channel != 1 && channel != 2) {
      throw ValidationError(fmt::format(
          "schedule line {}: channel must be 1 or 2, got {}", line_number,
          channel_text));
    }
    if (!std::isfinite(amplitude) || !std::isfinite(duration) ||
        duration < 0.0) {
      throw ValidationError(fmt::format(
          "schedule line {}: amplitude must be finite and duration >= 0",
          line_number));
    }
    out.Append(static_cast<int>(channel), amplitude, duration);
  }
  return out;
}

}  // namespace gait
}  // namespace purcell
