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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace purcell {
namespace acceptance {

struct CriterionResult {
  int id{0};
  std::string name;
  bool passed{false};
  /// Measured quantities against their thresholds.
  std::string detail;
  double seconds{0.0};
  /// Zero means no limit.
  double time_limit{0.0};

  /// "[PASS] 3 commutator convergence: slope 3.006 >= 2.7 (0.41 s)".
  std::string Line() const;
};

struct SuiteOptions {
  std::uint64_t seed{20260415};
  /// Criteria to run (1..11); empty runs all.
  std::vector<int> only;
  /// Called after each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

inline constexpr int kCriterionCount = 11;

/// Runs one criterion. A criterion that throws is reported as failed with
/// the exception text. Throws std::out_of_range for an unknown id.
CriterionResult RunCriterion(int id, std::uint64_t seed);

std::vector<CriterionResult> RunSuite(const SuiteOptions& options = {});

}  // namespace acceptance
}  // namespace purcell
