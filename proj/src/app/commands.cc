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

#include "purcell/app/commands.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "purcell/acceptance/suite.h"
#include "purcell/common/errors.h"
#include "purcell/io/output.h"
#include "purcell/lie/lie_toolkit.h"
#include "purcell/planner/planner.h"

namespace purcell {
namespace app {

namespace {

using geometry::GroupPose;
using lie::GroupDirection;
using model::Configuration;
using model::SwimmerModel;

constexpr double kPi = std::numbers::pi;
constexpr double kRadToDeg = 180.0 / kPi;
// Above this many integration steps the planner commands thin the stored
// samples (segment ends are always kept).
constexpr double kMaxStoredSteps = 200000.0;

std::string Pose(const GroupPose& g) {
  return fmt::format("({:.6g} m, {:.6g} m, {:.6g} rad)", g.x, g.y, g.theta);
}

std::string Sci(double v) { return fmt::format("{:.6g}", v); }

// Turns -0 into 0 for display.
lie::BracketCoefficients Unsigned0(lie::BracketCoefficients c) {
  return {c.alpha + 0.0, c.beta + 0.0, c.gamma + 0.0};
}

CommandOutput Start(const char* command, const io::RunConfig& config) {
  CommandOutput out;
  out.report.command = command;
  out.report.config_echo = io::EchoConfig(config);
  return out;
}

std::string ScheduleText(const gait::ControlSchedule& schedule) {
  std::ostringstream s;
  gait::WriteSchedule(s, schedule);
  return s.str();
}

std::vector<Eigen::Vector2d> ShapeLoop(const gait::ControlSchedule& schedule) {
  std::vector<Eigen::Vector2d> points = {{0.0, 0.0}};
  Eigen::Vector2d a(0.0, 0.0);
  for (const gait::ControlSegment& s : schedule.segments) {
    a(s.channel - 1) += s.amplitude * s.duration;
    points.push_back(a);
  }
  return points;
}

std::vector<Eigen::Vector2d> PathPoints(const sim::Trajectory& traj) {
  std::vector<Eigen::Vector2d> points;
  points.reserve(traj.samples.size());
  for (const sim::TrajectorySample& s : traj.samples) {
    points.emplace_back(s.pose.x, s.pose.y);
  }
  return points;
}

// Keeps memory bounded for long plans; reports the choice.
sim::IntegratorConfig PlannerIntegrator(const io::RunConfig& config,
                                        const gait::ControlSchedule& schedule,
                                        RunReport& report) {
  sim::IntegratorConfig cfg = config.integrator;
  double steps = 0.0;
  for (const gait::ControlSegment& s : schedule.segments) {
    steps += std::max(std::ceil(s.duration / cfg.max_step),
                      static_cast<double>(cfg.min_substeps));
  }
  const int needed = static_cast<int>(std::ceil(steps / kMaxStoredSteps));
  if (needed > cfg.sample_stride) {
    report.notes.push_back(fmt::format(
        "sample stride raised from {} to {} for {:.0f} integration steps",
        cfg.sample_stride, needed, steps));
    cfg.sample_stride = needed;
  }
  return cfg;
}

planner::CalibrationTable CalibrateFromConfig(const io::RunConfig& config,
                                              const SwimmerModel& model,
                                              RunReport& report) {
  const planner::CalibrationTable calib =
      planner::Calibrate(model, io::ResolveGaitSpecs(config, model),
                         config.integrator, config.balanced);
  for (int i = 0; i < 3; ++i) {
    const planner::GaitCalibration& g = calib.gaits[i];
    report.Add(fmt::format("calibration.{}",
                           lie::DirectionName(static_cast<GroupDirection>(i))),
               fmt::format("per cycle {}, duration {:.6g} s, {} segments, "
                           "dominance {:.4g}",
                           Pose(g.per_cycle), g.cycle_duration, g.cycle.size(),
                           g.dominance_ratio));
  }
  return calib;
}

void AddCompileSummary(const planner::CompiledPlan& compiled,
                       RunReport& report) {
  std::string reps;
  for (int r : compiled.repetitions) {
    reps += (reps.empty() ? "" : " ") + std::to_string(r);
  }
  std::string residuals;
  for (double r : compiled.schedule.maneuver_residuals) {
    residuals += (residuals.empty() ? "" : " ") + fmt::format("{:.4g}", r);
  }
  report.Add("repetitions", reps);
  report.Add("rounding residuals", residuals);
  report.Add("segments", std::to_string(compiled.schedule.size()));
  report.Add("duration", fmt::format("{:.6g} s", compiled.schedule.total_duration()));
  for (const std::string& w : compiled.warnings) report.notes.push_back(w);
}

}  // namespace

std::string RunReport::Render() const {
  std::string out = fmt::format("command: {}\n", command);
  for (const auto& [name, value] : results) {
    out += fmt::format("  {}: {}\n", name, value);
  }
  for (const std::string& n : notes) out += fmt::format("note: {}\n", n);
  for (const std::string& a : artifacts) out += fmt::format("wrote: {}\n", a);
  out += "config:\n";
  std::istringstream lines(config_echo);
  std::string line;
  while (std::getline(lines, line)) out += "  " + line + "\n";
  return out;
}

void WriteArtifacts(const std::filesystem::path& dir, CommandOutput& output) {
  for (const Artifact& a : output.artifacts) {
    const std::filesystem::path path = dir / a.name;
    io::WriteFileAtomically(path, a.content);
    output.report.artifacts.push_back(path.string());
  }
  const std::filesystem::path report_path = dir / "report.txt";
  output.report.artifacts.push_back(report_path.string());
  io::WriteFileAtomically(report_path, output.report.Render());
}

CommandOutput Analyze(const io::RunConfig& config) {
  CommandOutput out = Start("analyze", config);
  const SwimmerModel model(config.params);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<GroupPose> poses = {GroupPose::Identity()};
  for (int i = 0; i < 2; ++i) {
    poses.push_back({unit(rng), unit(rng), kPi * unit(rng)});
  }
  const int grid = config.analyze_grid;
  std::string csv =
      "pose,alpha1,alpha2,rank,sigma1,sigma2,sigma3,sigma4,sigma5\n";
  int min_rank = 5;
  int deficient = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < poses.size(); ++p) {
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        const Configuration q{
            model::ShapePoint::Wrapped(-kPi + i * 2.0 * kPi / grid,
                                       -kPi + j * 2.0 * kPi / grid),
            poses[p]};
        const lie::ControllabilityReport r =
            lie::ControllabilityAt(model, q, config.analyze_tol);
        min_rank = std::min(min_rank, r.rank);
        if (r.rank < 5) ++deficient;
        min_ratio = std::min(min_ratio,
                             r.singular_values(4) / r.singular_values(0));
        const auto& s = r.singular_values;
        csv += fmt::format("{},{:.17g},{:.17g},{},{:.17g},{:.17g},{:.17g},"
                           "{:.17g},{:.17g}\n",
                           p, q.shape.alpha1, q.shape.alpha2, r.rank, s(0),
                           s(1), s(2), s(3), s(4));
      }
    }
  }
  out.report.Add("points", std::to_string(poses.size() * grid * grid));
  out.report.Add("min rank", std::to_string(min_rank));
  out.report.Add("rank-deficient points", std::to_string(deficient));
  out.report.Add("min sigma5/sigma1", Sci(min_ratio));
  out.report.Add("relative tolerance", Sci(config.analyze_tol));
  out.artifacts.push_back({"analyze.csv", std::move(csv)});
  return out;
}

CommandOutput Coefficients(const io::RunConfig& config) {
  CommandOutput out = Start("coefficients", config);
  const SwimmerModel model(config.params);
  std::string table = fmt::format("{:<10}{:>16}{:>16}{:>16}\n", "direction",
                                  "alpha", "beta", "gamma");
  std::string normalized = table;
  for (int i = 0; i < 3; ++i) {
    const auto direction = static_cast<GroupDirection>(i);
    const lie::BracketCoefficients c =
        Unsigned0(lie::SolveBracketCoefficients(model, direction));
    const lie::BracketCoefficients n =
        Unsigned0(planner::NormalizedCoefficients(model, direction));
    table += fmt::format("{:<10}{:>16.8g}{:>16.8g}{:>16.8g}\n",
                         lie::DirectionName(direction), c.alpha, c.beta,
                         c.gamma);
    normalized += fmt::format("{:<10}{:>16.8g}{:>16.8g}{:>16.8g}\n",
                              lie::DirectionName(direction), n.alpha, n.beta,
                              n.gamma);
    out.report.Add(lie::DirectionName(direction),
                   fmt::format("alpha {:.8g}, beta {:.8g}, gamma {:.8g}",
                               c.alpha, c.beta, c.gamma));
  }
  out.artifacts.push_back(
      {"coefficients.txt",
       "# solved at the straight shape, unit target per direction\n" + table +
           "# scaled to unit largest magnitude\n" + normalized});
  return out;
}

DirectionSelection ParseDirectionSelection(const std::string& text) {
  if (text == "x") return DirectionSelection::kX;
  if (text == "y") return DirectionSelection::kY;
  if (text == "theta") return DirectionSelection::kTheta;
  if (text == "all") return DirectionSelection::kAll;
  throw ValidationError(
      fmt::format("direction must be x, y, theta or all, got `{}`", text));
}

CommandOutput Synthesize(const io::RunConfig& config,
                         DirectionSelection selection) {
  CommandOutput out = Start("synthesize", config);
  const SwimmerModel model(config.params);
  const std::array<gait::GaitSpec, 3> specs =
      io::ResolveGaitSpecs(config, model);
  for (int i = 0; i < 3; ++i) {
    if (selection != DirectionSelection::kAll &&
        static_cast<int>(selection) != i) {
      continue;
    }
    const char* name = lie::DirectionName(static_cast<GroupDirection>(i));
    for (auto form : {config.form, config.form == gait::ExpansionForm::kLiteral
                                       ? gait::ExpansionForm::kRederived
                                       : gait::ExpansionForm::kLiteral}) {
      gait::GaitSpec spec = specs[i];
      spec.form = form;
      const gait::ControlSchedule s = gait::Synthesize(spec);
      const sim::NetDisplacement net = sim::ComputeNetDisplacement(
          sim::Simulate(s, Configuration{}, model, config.integrator));
      const gait::ShapeExcursion ex = gait::ComputeShapeExcursion(s);
      out.report.Add(
          fmt::format("{} ({})", name, gait::FormName(form)),
          fmt::format("{} segments, {:.6g} s, max joint excursion {:.4g} rad, "
                      "net {}",
                      s.size(), s.total_duration(), ex.max(), Pose(net.delta)));
      const bool primary = form == config.form;
      const std::string stem =
          primary ? fmt::format("gait_{}", name)
                  : fmt::format("gait_{}_{}", name, gait::FormName(form));
      out.artifacts.push_back({stem + ".sched", ScheduleText(s)});
      if (primary) {
        io::Plot plot;
        plot.kind = io::PlotKind::kPathInPlane;
        plot.title = fmt::format("{} gait in shape space ({})", name,
                                 gait::FormName(form));
        plot.x_label = "alpha1 (rad)";
        plot.y_label = "alpha2 (rad)";
        plot.series.push_back({"joint angles", ShapeLoop(s), false});
        out.artifacts.push_back({stem + ".svg", io::RenderSvg(plot)});
      }
    }
  }
  return out;
}

CommandOutput Simulate(const io::RunConfig& config,
                       const std::filesystem::path& schedule_path) {
  CommandOutput out = Start("simulate", config);
  std::ifstream in(schedule_path);
  if (!in) {
    throw ValidationError(
        fmt::format("cannot read schedule file {}", schedule_path.string()));
  }
  gait::ControlSchedule schedule;
  try {
    schedule = gait::ReadSchedule(in);
  } catch (const ValidationError& e) {
    throw ValidationError(
        fmt::format("{}: {}", schedule_path.string(), e.what()));
  }
  if (schedule.empty()) {
    throw ValidationError(fmt::format("schedule file {} has no segments",
                                      schedule_path.string()));
  }
  const SwimmerModel model(config.params);
  const Configuration q0{{}, config.line.start};
  const sim::Trajectory traj =
      sim::Simulate(schedule, q0, model, config.integrator);
  const sim::NetDisplacement net = sim::ComputeNetDisplacement(traj);
  out.report.Add("segments", std::to_string(schedule.size()));
  out.report.Add("duration", fmt::format("{:.6g} s", schedule.total_duration()));
  out.report.Add("samples", std::to_string(traj.samples.size()));
  out.report.Add("final pose", Pose(traj.samples.back().pose));
  out.report.Add("net displacement (start body frame)", Pose(net.delta));
  out.report.Add("shape closure", Sci(net.shape_closure));
  for (const std::string& w : traj.warnings) out.report.notes.push_back(w);

  io::Plot path;
  path.title = "swimmer path";
  path.x_label = "x (m)";
  path.y_label = "y (m)";
  path.series.push_back({"base link midpoint", PathPoints(traj), false});
  io::Plot shape;
  shape.kind = io::PlotKind::kTimeSeries;
  shape.title = "joint angles";
  shape.x_label = "t (s)";
  shape.y_label = "angle (rad)";
  io::PlotSeries a1{"alpha1", {}, false};
  io::PlotSeries a2{"alpha2", {}, false};
  for (const sim::TrajectorySample& s : traj.samples) {
    a1.points.emplace_back(s.time, s.shape.alpha1);
    a2.points.emplace_back(s.time, s.shape.alpha2);
  }
  shape.series = {a1, a2};
  out.artifacts.push_back({"trajectory.csv", io::TrajectoryCsv(traj)});
  out.artifacts.push_back({"path.svg", io::RenderSvg(path)});
  out.artifacts.push_back({"shape.svg", io::RenderSvg(shape)});
  return out;
}

CommandOutput Probe(const io::RunConfig& config) {
  CommandOutput out = Start("probe", config);
  const SwimmerModel model(config.params);
  const sim::ControlFields fields = sim::SwimmerFields(model);
  const Configuration p{};
  const model::TangentVector5 z = lie::BracketBasis(model, p)[2];
  const Eigen::Vector3d bracket = geometry::BodyRate(p.pose, z.tail<3>()).AsVector();
  out.report.Add("[g1,g2] group part", fmt::format("({:.8g}, {:.8g}, {:.8g})",
                                                   bracket(0), bracket(1),
                                                   bracket(2)));
  const std::vector<double>& ladder = config.probe_ladder;
  std::vector<std::array<Eigen::Vector3d, 4>> delta(ladder.size());
  for (std::size_t e = 0; e < ladder.size(); ++e) {
    for (int v = 0; v < 4; ++v) {
      delta[e][v] = sim::SquareGaitDisplacement(fields, ladder[e], p, v,
                                                config.integrator);
    }
  }
  auto index_of = [&ladder](double eps) {
    return static_cast<std::size_t>(
        std::find(ladder.begin(), ladder.end(), eps) - ladder.begin());
  };
  std::string csv = "kind,eps,error\n";
  for (int v = 0; v < 4; ++v) {
    const sim::ConvergenceResult r =
        sim::ConvergenceProbe(ladder, [&](double eps) {
          return (delta[index_of(eps)][v] - eps * eps * bracket).norm();
        });
    for (const sim::ConvergenceRow& row : r.table) {
      csv += fmt::format("commutator_v{},{:.17g},{:.17g}\n", v, row.parameter,
                         row.error);
    }
    out.report.Add(fmt::format("commutator slope, variant {}", v),
                   fmt::format("{:.4f}{}", r.slope,
                               r.monotone ? "" : " (not monotone)"));
    if (!r.diagnostic.empty()) out.report.notes.push_back(r.diagnostic);
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      const sim::ConvergenceResult r =
          sim::ConvergenceProbe(ladder, [&](double eps) {
            const auto e = index_of(eps);
            return (delta[e][a] - delta[e][b]).norm();
          });
      for (const sim::ConvergenceRow& row : r.table) {
        csv += fmt::format("variants_{}{},{:.17g},{:.17g}\n", a, b,
                           row.parameter, row.error);
      }
      out.report.Add(fmt::format("variant difference slope, {} vs {}", a, b),
                     fmt::format("{:.4f}", r.slope));
    }
  }
  out.artifacts.push_back({"probe.csv", std::move(csv)});
  return out;
}

CommandOutput PlanLine(const io::RunConfig& config) {
  CommandOutput out = Start("plan-line", config);
  const SwimmerModel model(config.params);
  const planner::CalibrationTable calib =
      CalibrateFromConfig(config, model, out.report);
  const GroupPose start = config.line.start;
  const Eigen::Vector2d origin(start.x, start.y);
  const Eigen::Vector2d target =
      origin + config.line.length * Eigen::Vector2d(std::cos(config.line.bearing),
                                                     std::sin(config.line.bearing));
  const std::vector<planner::Maneuver> maneuvers =
      planner::PlanLine(start, target);
  const planner::CompiledPlan compiled = planner::Compile(maneuvers, calib);
  out.report.Add("rotation", fmt::format("{:.6g} deg", maneuvers[0].magnitude * kRadToDeg));
  out.report.Add("translation", fmt::format("{:.6g} m", maneuvers[1].magnitude));
  AddCompileSummary(compiled, out.report);

  const sim::IntegratorConfig cfg =
      PlannerIntegrator(config, compiled.schedule, out.report);
  const sim::Trajectory traj =
      sim::Simulate(compiled.schedule, {{}, start}, model, cfg);
  const GroupPose end = traj.samples.back().pose;
  const double commanded_heading =
      geometry::WrapAngle(start.theta + maneuvers[0].magnitude);
  out.report.Add("target", fmt::format("({:.6g} m, {:.6g} m)", target.x(), target.y()));
  out.report.Add("final pose", Pose(end));
  out.report.Add("position error",
                 fmt::format("{:.6g} m", (Eigen::Vector2d(end.x, end.y) - target).norm()));
  out.report.Add("heading error",
                 fmt::format("{:.6g} rad (one theta cycle is {:.6g} rad)",
                             geometry::WrapAngle(end.theta - commanded_heading),
                             std::abs(calib[GroupDirection::kTheta].per_cycle.theta)));
  for (const std::string& w : traj.warnings) out.report.notes.push_back(w);

  io::Plot plot;
  plot.title = "line tracking";
  plot.x_label = "x (m)";
  plot.y_label = "y (m)";
  plot.series.push_back({"simulated", PathPoints(traj), false});
  plot.series.push_back({"start and target", {origin, target}, true});
  out.artifacts.push_back({"plan_line.sched", ScheduleText(compiled.schedule)});
  out.artifacts.push_back({"plan_line.csv", io::TrajectoryCsv(traj)});
  out.artifacts.push_back({"plan_line.svg", io::RenderSvg(plot)});
  return out;
}

CommandOutput PlanCircle(const io::RunConfig& config) {
  CommandOutput out = Start("plan-circle", config);
  const SwimmerModel model(config.params);
  const planner::CalibrationTable calib =
      CalibrateFromConfig(config, model, out.report);
  const io::CircleTask& task = config.circle;
  const planner::PolygonPlan plan =
      planner::PlanPolygon(task.center, task.radius, task.sides);
  const planner::CompiledPlan compiled = planner::Compile(plan.maneuvers, calib);
  out.report.Add("side length", fmt::format("{:.6g} m", plan.side_length));
  out.report.Add("exterior turn", fmt::format("{:.6g} deg", plan.exterior_turn * kRadToDeg));
  AddCompileSummary(compiled, out.report);

  const sim::IntegratorConfig cfg =
      PlannerIntegrator(config, compiled.schedule, out.report);
  const sim::Trajectory traj =
      sim::Simulate(compiled.schedule, {{}, plan.start}, model, cfg);
  const std::vector<Eigen::Vector2d> arrivals =
      planner::ArrivalPoints(traj, compiled);
  const planner::TrackingReport tracking =
      planner::MakeTrackingReport(plan.path, arrivals, /*fit_circle=*/true);
  const GroupPose end = traj.samples.back().pose;
  const double closure = std::hypot(end.x - plan.start.x, end.y - plan.start.y);
  const double circumference = 2.0 * kPi * task.radius;
  std::string errors;
  for (double e : tracking.waypoint_errors) {
    errors += (errors.empty() ? "" : " ") + fmt::format("{:.4g}", e);
  }
  out.report.Add("waypoint errors (m)", errors);
  out.report.Add("max / mean waypoint error",
                 fmt::format("{:.6g} m / {:.6g} m", tracking.max_error,
                             tracking.mean_error));
  if (tracking.best_fit) {
    out.report.Add("best-fit circle",
                   fmt::format("center ({:.6g}, {:.6g}) m, radius {:.6g} m "
                               "({:+.2f}% of planned)",
                               tracking.best_fit->center.x(),
                               tracking.best_fit->center.y(),
                               tracking.best_fit->radius,
                               100.0 * (tracking.best_fit->radius - task.radius) /
                                   task.radius));
  }
  out.report.Add("closure error",
                 fmt::format("{:.6g} m ({:.2f}% of circumference)", closure,
                             100.0 * closure / circumference));
  for (const std::string& w : traj.warnings) out.report.notes.push_back(w);

  io::Plot plot;
  plot.title = fmt::format("{}-gon tracking, radius {:.4g} m", task.sides,
                           task.radius);
  plot.x_label = "x (m)";
  plot.y_label = "y (m)";
  plot.series.push_back({"simulated", PathPoints(traj), false});
  plot.series.push_back({"planned polygon", plan.path.points, false});
  plot.series.push_back({"arrivals", arrivals, true});
  if (tracking.best_fit) {
    plot.circle = io::PlotCircle{"best-fit circle", tracking.best_fit->center,
                                 tracking.best_fit->radius};
  }
  out.artifacts.push_back({"plan_circle.sched", ScheduleText(compiled.schedule)});
  out.artifacts.push_back({"plan_circle.csv", io::TrajectoryCsv(traj)});
  out.artifacts.push_back({"plan_circle.svg", io::RenderSvg(plot)});
  return out;
}

CommandOutput SelfTest(const io::RunConfig& config, std::vector<int> only,
                       const std::function<void(const std::string&)>& on_line) {
  CommandOutput out = Start("selftest", config);
  acceptance::SuiteOptions options;
  options.seed = config.seed;
  options.only = std::move(only);
  options.on_result = [&on_line](const acceptance::CriterionResult& r) {
    if (on_line) on_line(r.Line());
  };
  for (int id : options.only) {
    if (id < 1 || id > acceptance::kCriterionCount) {
      throw ValidationError(fmt::format("no acceptance criterion {}", id));
    }
  }
  int failed = 0;
  std::string lines;
  for (const acceptance::CriterionResult& r : acceptance::RunSuite(options)) {
    out.report.Add(fmt::format("criterion {}", r.id), r.Line());
    lines += r.Line() + "\n";
    if (!r.passed) ++failed;
  }
  out.report.Add("failed", std::to_string(failed));
  out.artifacts.push_back({"selftest.txt", std::move(lines)});
  out.exit_code = failed == 0 ? 0 : 2;
  return out;
}

}  // namespace app
}  // namespace purcell
