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

// purcell: command-line driver for the swimmer toolkit.
//
// Exit codes: 0 success, 1 invalid input or usage, 2 numerical failure or a
// failed selftest.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "purcell/app/commands.h"
#include "purcell/common/errors.h"

namespace {

using purcell::app::CommandOutput;

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Options {
  std::string config_path{"default"};
  std::optional<std::string> out_dir;
  bool quiet{false};
  std::vector<std::string> settings;

  std::string direction{"all"};
  std::string schedule_path;
  std::optional<std::string> length;
  std::optional<std::string> bearing;
  std::optional<std::string> radius;
  std::optional<std::string> sides;
  std::optional<std::string> center_x;
  std::optional<std::string> center_y;
  std::vector<int> criteria;
};

// Subcommand flags become config overrides so that they share the config
// file's units and validation.
std::vector<std::string> Overrides(const Options& o) {
  std::vector<std::string> lines;
  for (const std::string& s : o.settings) lines.push_back(s);
  auto add = [&lines](const char* key, const std::optional<std::string>& v) {
    if (v) lines.push_back(fmt::format("{} = {}", key, *v));
  };
  add("planner.line.length", o.length);
  add("planner.line.bearing", o.bearing);
  add("planner.circle.radius", o.radius);
  add("planner.circle.sides", o.sides);
  add("planner.circle.center_x", o.center_x);
  add("planner.circle.center_y", o.center_y);
  return lines;
}

CommandOutput Dispatch(const std::string& command, const Options& o,
                       const purcell::io::RunConfig& config) {
  namespace app = purcell::app;
  if (command == "analyze") return app::Analyze(config);
  if (command == "coefficients") return app::Coefficients(config);
  if (command == "synthesize") {
    return app::Synthesize(config, app::ParseDirectionSelection(o.direction));
  }
  if (command == "simulate") return app::Simulate(config, o.schedule_path);
  if (command == "probe") return app::Probe(config);
  if (command == "plan-line") return app::PlanLine(config);
  if (command == "plan-circle") return app::PlanCircle(config);
  return app::SelfTest(config, o.criteria, [&o](const std::string& line) {
    if (!o.quiet) std::cout << line << std::endl;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Planar three-link swimmer: controllability, gait synthesis, "
               "simulation and open-loop planning"};
  cli.require_subcommand(1);
  Options o;
  cli.add_option("--config", o.config_path,
                 "config file of `key = value` lines, or `default`");
  cli.add_option("--out", o.out_dir, "output directory (overrides output.dir)");
  cli.add_flag("--quiet,-q", o.quiet, "print nothing on success");
  cli.add_option("--set", o.settings,
                 "extra `key=value` config line, applied after the file; "
                 "repeatable")
      ->allow_extra_args(false);

  cli.add_subcommand("analyze", "bracket-basis rank over a shape grid");
  cli.add_subcommand("coefficients",
                     "bracket coefficients for pure x, y and theta motion");
  CLI::App* synthesize =
      cli.add_subcommand("synthesize", "basis gait schedules in both forms");
  synthesize->add_option("--direction", o.direction, "x, y, theta or all");
  CLI::App* simulate =
      cli.add_subcommand("simulate", "simulate a schedule file");
  simulate->add_option("--schedule", o.schedule_path, "schedule file")
      ->required();
  cli.add_subcommand("probe", "commutator convergence ladders");
  CLI::App* line = cli.add_subcommand("plan-line", "rotate, then translate");
  line->add_option("--length", o.length, "distance to the target, e.g. 12cm");
  line->add_option("--bearing", o.bearing, "bearing of the target, e.g. 154deg");
  CLI::App* circle =
      cli.add_subcommand("plan-circle", "track a polygon approximating a circle");
  circle->add_option("--radius", o.radius, "circle radius, e.g. 0.2 or 20cm");
  circle->add_option("--sides", o.sides, "polygon sides");
  circle->add_option("--center-x", o.center_x, "circle center x");
  circle->add_option("--center-y", o.center_y, "circle center y");
  CLI::App* selftest =
      cli.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--only", o.criteria, "criterion numbers to run (1-11)");
  for (CLI::App* sub : cli.get_subcommands({})) sub->fallthrough();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << cli.help();
    return kExitValidation;
  }
  const std::string command = cli.get_subcommands().front()->get_name();

  try {
    const purcell::io::RunConfig config =
        purcell::io::LoadConfig(o.config_path, Overrides(o));
    CommandOutput output = Dispatch(command, o, config);
    purcell::app::WriteArtifacts(o.out_dir.value_or(config.output_dir), output);
    if (!o.quiet) std::cout << output.report.Render();
    return output.exit_code;
  } catch (const purcell::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const purcell::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    // I/O problems: the input or environment is unusable.
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
