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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "purcell/io/config.h"

namespace purcell {
namespace app {

struct RunReport {
  std::string command;
  std::string config_echo;
  /// Ordered (name, value) pairs.
  std::vector<std::pair<std::string, std::string>> results;
  std::vector<std::string> notes;
  /// Paths of written files, filled in by WriteArtifacts.
  std::vector<std::string> artifacts;

  void Add(std::string name, std::string value) {
    results.emplace_back(std::move(name), std::move(value));
  }
  /// Plain-text rendering: command, results, notes, artifacts, then the
  /// config echo.
  std::string Render() const;
};

struct Artifact {
  /// File name relative to the output directory.
  std::string name;
  std::string content;
};

struct CommandOutput {
  RunReport report;
  std::vector<Artifact> artifacts;
  /// Nonzero when the command ran but its checks failed (selftest).
  int exit_code{0};
};

/// Writes every artifact and then report.txt into `dir`, appending the paths
/// to the report. Nothing is written before this call.
void WriteArtifacts(const std::filesystem::path& dir, CommandOutput& output);

/// Bracket-basis rank over an analyze.grid x analyze.grid shape grid at the
/// identity pose and two seeded random poses.
CommandOutput Analyze(const io::RunConfig& config);

/// Solved and normalized bracket coefficients per direction at the straight
/// shape.
CommandOutput Coefficients(const io::RunConfig& config);

/// Which basis gaits a command covers.
enum class DirectionSelection { kX, kY, kTheta, kAll };
DirectionSelection ParseDirectionSelection(const std::string& text);

/// Schedules of the selected basis gaits in both expansion forms, each
/// simulated for one cycle from the straight shape.
CommandOutput Synthesize(const io::RunConfig& config,
                         DirectionSelection selection);

/// Simulates a schedule file from the straight shape at planner.start.
/// Throws ValidationError if the schedule has no segments.
CommandOutput Simulate(const io::RunConfig& config,
                       const std::filesystem::path& schedule_path);

/// Commutator and gait-variant convergence ladders at the straight shape.
CommandOutput Probe(const io::RunConfig& config);

/// Rotate-then-translate along planner.line from planner.start, compiled,
/// simulated and compared with the target.
CommandOutput PlanLine(const io::RunConfig& config);

/// Regular polygon approximation of planner.circle, compiled, simulated and
/// compared with the vertices and a best-fit circle.
CommandOutput PlanCircle(const io::RunConfig& config);

/// Runs the acceptance suite; exit_code is 2 if any criterion fails.
/// `on_line` receives each pass/fail line as soon as it is known.
CommandOutput SelfTest(const io::RunConfig& config, std::vector<int> only,
                       const std::function<void(const std::string&)>& on_line);

}  // namespace app
}  // namespace purcell
