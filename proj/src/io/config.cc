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

#include "purcell/io/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "purcell/common/errors.h"
#include "purcell/planner/planner.h"

namespace purcell {
namespace io {

namespace {

enum class Unit { kNone, kLength, kAngle, kTime };

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Setters throw location-free messages; ApplyLine adds the location.
[[noreturn]] void Fail(const std::string& message) {
  throw ValidationError(message);
}

double ParseNumber(std::string_view text, Unit unit) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr == begin) {
    Fail(fmt::format("expected a number, got `{}`", text));
  }
  const std::string_view suffix = Trim(std::string_view(ptr, end - ptr));
  double scale = 1.0;
  if (!suffix.empty()) {
    bool ok = false;
    switch (unit) {
      case Unit::kLength:
        if (suffix == "m") scale = 1.0, ok = true;
        if (suffix == "cm") scale = 1e-2, ok = true;
        if (suffix == "mm") scale = 1e-3, ok = true;
        break;
      case Unit::kAngle:
        if (suffix == "rad") scale = 1.0, ok = true;
        if (suffix == "deg") scale = std::numbers::pi / 180.0, ok = true;
        break;
      case Unit::kTime:
        if (suffix == "s") scale = 1.0, ok = true;
        if (suffix == "ms") scale = 1e-3, ok = true;
        break;
      case Unit::kNone:
        break;
    }
    if (!ok) Fail(fmt::format("unit `{}` not accepted here", suffix));
  }
  if (!std::isfinite(value)) Fail("value must be finite");
  return value * scale;
}

long long ParseInteger(std::string_view text) {
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    Fail(fmt::format("expected an integer, got `{}`", text));
  }
  return value;
}

bool ParseBool(std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  Fail(fmt::format("expected true or false, got `{}`", text));
}

void RequirePositive(double v) {
  if (!(v > 0.0)) Fail(fmt::format("value must be > 0, got {}", v));
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

Setter Positive(double RunConfig::*field, Unit unit) {
  return [field, unit](RunConfig& c, std::string_view v) {
    const double x = ParseNumber(v, unit);
    RequirePositive(x);
    c.*field = x;
  };
}

template <typename F>
Setter NumberInto(Unit unit, F assign) {
  return [unit, assign](RunConfig& c, std::string_view v) {
    assign(c, ParseNumber(v, unit));
  };
}

Setter PositiveInt(std::function<int&(RunConfig&)> field, long long max) {
  return [field, max](RunConfig& c, std::string_view v) {
    const long long x = ParseInteger(v);
    if (x < 1 || x > max) {
      Fail(fmt::format("value must be in [1, {}], got {}", max, x));
    }
    field(c) = static_cast<int>(x);
  };
}

const std::map<std::string, Setter, std::less<>>& Setters() {
  static const auto* table = [] {
    auto* t = new std::map<std::string, Setter, std::less<>>;
    auto& m = *t;
    m["swimmer.L"] = NumberInto(Unit::kLength, [](RunConfig& c, double x) {
      RequirePositive(x);
      c.params.half_length = x;
    });
    m["swimmer.b"] = NumberInto(Unit::kLength, [](RunConfig& c, double x) {
      RequirePositive(x);
      c.params.radius = x;
    });
    m["swimmer.mu"] = NumberInto(Unit::kNone, [](RunConfig& c, double x) {
      RequirePositive(x);
      c.params.viscosity = x;
    });
    m["swimmer.drag"] = [](RunConfig& c, std::string_view v) {
      if (v == "rft") {
        c.params.source = model::DragSource::kResistiveForceTheory;
      } else if (v == "measured") {
        c.params.source = model::DragSource::kMeasuredForces;
      } else {
        Fail(fmt::format("swimmer.drag must be rft or measured, got `{}`", v));
      }
    };
    m["swimmer.normal_force"] = Positive(&RunConfig::normal_force, Unit::kNone);
    m["swimmer.tangential_force"] =
        Positive(&RunConfig::tangential_force, Unit::kNone);
    m["swimmer.calibration_velocity"] =
        NumberInto(Unit::kNone, [](RunConfig& c, double x) {
          RequirePositive(x);
          c.calibration_velocity = x;
        });

    m["integrator.h"] = NumberInto(Unit::kTime, [](RunConfig& c, double x) {
      RequirePositive(x);
      c.integrator.max_step = x;
    });
    m["integrator.min_substeps"] = PositiveInt(
        [](RunConfig& c) -> int& { return c.integrator.min_substeps; }, 1000000);
    m["integrator.sample_stride"] = PositiveInt(
        [](RunConfig& c) -> int& { return c.integrator.sample_stride; },
        1000000000);

    m["gait.form"] = [](RunConfig& c, std::string_view v) {
      if (v == "literal") {
        c.form = gait::ExpansionForm::kLiteral;
      } else if (v == "rederived") {
        c.form = gait::ExpansionForm::kRederived;
      } else {
        Fail(fmt::format("gait.form must be literal or rederived, got `{}`", v));
      }
    };
    m["gait.balanced"] = [](RunConfig& c, std::string_view v) {
      c.balanced = ParseBool(v);
    };
    const std::array<const char*, 3> names = {"x", "y", "theta"};
    for (int i = 0; i < 3; ++i) {
      const std::string prefix = fmt::format("gait.{}.", names[i]);
      m[prefix + "alpha"] = NumberInto(Unit::kNone, [i](RunConfig& c, double x) {
        c.gaits[i].alpha = x;
      });
      m[prefix + "beta"] = NumberInto(Unit::kNone, [i](RunConfig& c, double x) {
        c.gaits[i].beta = x;
      });
      m[prefix + "gamma"] = NumberInto(Unit::kNone, [i](RunConfig& c, double x) {
        c.gaits[i].gamma = x;
      });
      m[prefix + "t"] = NumberInto(Unit::kTime, [i](RunConfig& c, double x) {
        RequirePositive(x);
        c.gaits[i].t = x;
      });
      m[prefix + "n"] = PositiveInt(
          [i](RunConfig& c) -> int& { return c.gaits[i].n; }, 1000);
    }

    m["planner.start.x"] = NumberInto(Unit::kLength, [](RunConfig& c, double x) {
      c.line.start.x = x;
    });
    m["planner.start.y"] = NumberInto(Unit::kLength, [](RunConfig& c, double x) {
      c.line.start.y = x;
    });
    m["planner.start.theta"] = NumberInto(Unit::kAngle, [](RunConfig& c, double x) {
      c.line.start.theta = geometry::WrapAngle(x);
    });
    m["planner.line.length"] = NumberInto(Unit::kLength, [](RunConfig& c, double x) {
      RequirePositive(x);
      c.line.length = x;
    });
    m["planner.line.bearing"] = NumberInto(Unit::kAngle, [](RunConfig& c, double x) {
      c.line.bearing = geometry::WrapAngle(x);
    });
    m["planner.circle.center_x"] = NumberInto(Unit::kLength, [](RunConfig& c, double x) {
      c.circle.center.x() = x;
    });
    m["planner.circle.center_y"] = NumberInto(Unit::kLength, [](RunConfig& c, double x) {
      c.circle.center.y() = x;
    });
    m["planner.circle.radius"] = NumberInto(Unit::kLength, [](RunConfig& c, double x) {
      RequirePositive(x);
      c.circle.radius = x;
    });
    m["planner.circle.sides"] = [](RunConfig& c, std::string_view v) {
      const long long x = ParseInteger(v);
      if (x < 3 || x > 100000) {
        Fail(fmt::format("planner.circle.sides must be in [3, 100000], got {}", x));
      }
      c.circle.sides = static_cast<int>(x);
    };

    m["analyze.grid"] = PositiveInt(
        [](RunConfig& c) -> int& { return c.analyze_grid; }, 1000);
    m["analyze.tol"] = NumberInto(Unit::kNone, [](RunConfig& c, double x) {
      if (!(x > 0.0 && x < 1.0)) {
        Fail(fmt::format("analyze.tol must be in (0, 1), got {}", x));
      }
      c.analyze_tol = x;
    });
    m["probe.ladder"] = [](RunConfig& c, std::string_view v) {
      std::vector<double> ladder;
      std::string_view rest = v;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = Trim(rest.substr(0, comma));
        const double x = ParseNumber(item, Unit::kTime);
        RequirePositive(x);
        ladder.push_back(x);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
      if (ladder.size() < 3) Fail("probe.ladder needs at least 3 values");
      c.probe_ladder = std::move(ladder);
    };
    m["output.dir"] = [](RunConfig& c, std::string_view v) {
      if (v.empty()) Fail("output.dir must not be empty");
      c.output_dir = std::string(v);
    };
    m["seed"] = [](RunConfig& c, std::string_view v) {
      const long long x = ParseInteger(v);
      if (x < 0) Fail("seed must be >= 0");
      c.seed = static_cast<std::uint64_t>(x);
    };
    return t;
  }();
  return *table;
}

// Fills the drag coefficients; the error names the keys involved.
void FinishParams(RunConfig& c) {
  if (c.params.radius >= c.params.half_length) {
    throw ValidationError(fmt::format(
        "slenderness violated: swimmer.b = {} must be smaller than "
        "swimmer.L = {}",
        c.params.radius, c.params.half_length));
  }
  if (c.params.source == model::DragSource::kResistiveForceTheory) {
    c.params = model::DeriveDragCoefficients(c.params);
    return;
  }
  if (!c.calibration_velocity) {
    throw ValidationError(
        "swimmer.drag = measured needs swimmer.calibration_velocity (flow "
        "speed at which the forces were measured)");
  }
  c.params = model::DragCoefficientsFromForces(c.params, c.normal_force,
                                               c.tangential_force,
                                               *c.calibration_velocity);
}

std::string FormatDouble(double v) { return fmt::format("{:.17g}", v); }

// Applies one `key = value` line; `where` prefixes diagnostics.
void ApplyLine(RunConfig& c, std::string_view line, const std::string& where,
               std::set<std::string, std::less<>>& seen) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) {
    line = line.substr(0, hash);
  }
  line = Trim(line);
  if (line.empty()) return;
  auto fail = [&where](const std::string& message) {
    throw ValidationError(fmt::format("{}: {}", where, message));
  };
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    fail(fmt::format("expected `key = value`, got `{}`", line));
  }
  const std::string_view key = Trim(line.substr(0, eq));
  const std::string_view value = Trim(line.substr(eq + 1));
  if (key.empty() || value.empty()) {
    fail("expected `key = value` with both sides nonempty");
  }
  const auto it = Setters().find(key);
  if (it == Setters().end()) fail(fmt::format("unknown key `{}`", key));
  if (!seen.emplace(key).second) fail(fmt::format("key `{}` given twice", key));
  try {
    it->second(c, value);
  } catch (const ValidationError& e) {
    fail(e.what());
  }
}

}  // namespace

RunConfig DefaultConfig() {
  RunConfig c;
  c.gaits[1].t = 0.0625;
  c.gaits[1].n = 8;
  return c;
}

RunConfig ParseConfig(std::string_view text,
                      const std::vector<std::string>& overrides) {
  RunConfig c = DefaultConfig();
  std::set<std::string, std::less<>> seen;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    const std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_number;
    ApplyLine(c, line, fmt::format("config line {}", line_number), seen);
  }
  std::set<std::string, std::less<>> seen_overrides;
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    ApplyLine(c, overrides[i], fmt::format("override {}", i + 1),
              seen_overrides);
  }
  FinishParams(c);
  return c;
}

RunConfig LoadConfig(const std::filesystem::path& path,
                     const std::vector<std::string>& overrides) {
  if (path == "default") return ParseConfig("", overrides);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError(fmt::format("cannot read config file {}", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseConfig(buffer.str(), overrides);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string EchoConfig(const RunConfig& c) {
  std::string out;
  auto put = [&out](std::string_view key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  const bool measured = c.params.source == model::DragSource::kMeasuredForces;
  put("swimmer.L", FormatDouble(c.params.half_length));
  put("swimmer.b", FormatDouble(c.params.radius));
  put("swimmer.mu", FormatDouble(c.params.viscosity));
  put("swimmer.drag", measured ? "measured" : "rft");
  put("swimmer.normal_force", FormatDouble(c.normal_force));
  put("swimmer.tangential_force", FormatDouble(c.tangential_force));
  if (c.calibration_velocity) {
    put("swimmer.calibration_velocity", FormatDouble(*c.calibration_velocity));
  }
  put("integrator.h", FormatDouble(c.integrator.max_step));
  put("integrator.min_substeps", std::to_string(c.integrator.min_substeps));
  put("integrator.sample_stride", std::to_string(c.integrator.sample_stride));
  put("gait.form", gait::FormName(c.form));
  put("gait.balanced", c.balanced ? "true" : "false");
  const std::array<const char*, 3> names = {"x", "y", "theta"};
  for (int i = 0; i < 3; ++i) {
    const GaitSettings& g = c.gaits[i];
    const std::string prefix = fmt::format("gait.{}.", names[i]);
    if (g.alpha) put(prefix + "alpha", FormatDouble(*g.alpha));
    if (g.beta) put(prefix + "beta", FormatDouble(*g.beta));
    if (g.gamma) put(prefix + "gamma", FormatDouble(*g.gamma));
    put(prefix + "t", FormatDouble(g.t));
    put(prefix + "n", std::to_string(g.n));
  }
  put("planner.start.x", FormatDouble(c.line.start.x));
  put("planner.start.y", FormatDouble(c.line.start.y));
  put("planner.start.theta", FormatDouble(c.line.start.theta));
  put("planner.line.length", FormatDouble(c.line.length));
  put("planner.line.bearing", FormatDouble(c.line.bearing));
  put("planner.circle.center_x", FormatDouble(c.circle.center.x()));
  put("planner.circle.center_y", FormatDouble(c.circle.center.y()));
  put("planner.circle.radius", FormatDouble(c.circle.radius));
  put("planner.circle.sides", std::to_string(c.circle.sides));
  put("analyze.grid", std::to_string(c.analyze_grid));
  put("analyze.tol", FormatDouble(c.analyze_tol));
  std::string ladder;
  for (std::size_t i = 0; i < c.probe_ladder.size(); ++i) {
    if (i > 0) ladder += ", ";
    ladder += FormatDouble(c.probe_ladder[i]);
  }
  put("probe.ladder", ladder);
  put("output.dir", c.output_dir);
  put("seed", std::to_string(c.seed));
  return out;
}

std::array<gait::GaitSpec, 3> ResolveGaitSpecs(const RunConfig& config,
                                               const model::SwimmerModel& model) {
  std::array<gait::GaitSpec, 3> specs;
  for (int i = 0; i < 3; ++i) {
    const GaitSettings& g = config.gaits[i];
    gait::GaitSpec& spec = specs[i];
    spec.t = g.t;
    spec.n = g.n;
    spec.form = config.form;
    if (g.HasCoefficients()) {
      spec.coefficients = {g.alpha.value_or(0.0), g.beta.value_or(0.0),
                           g.gamma.value_or(0.0)};
    } else {
      spec.coefficients = planner::NormalizedCoefficients(
          model, static_cast<lie::GroupDirection>(i));
    }
  }
  return specs;
}

}  // namespace io
}  // namespace purcell
