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

#include <Eigen/Core>

#include "purcell/model/swimmer.h"

namespace purcell {
namespace acceptance {

/// Reference body velocity from a dense trapezoid discretization of each
/// link. Every link is treated as a rigid rod between two endpoints whose
/// velocity follows from the joint velocity and the link's angular rate; the
/// body velocity makes the total drag force and torque vanish. Shares no code
/// with SwimmerModel beyond the parameter struct.
Eigen::Vector3d OracleBodyVelocity(const model::SwimmerParams& params,
                                   const model::ShapePoint& shape,
                                   const model::ShapeVelocity& rate,
                                   int points_per_link = 10000);

}  // namespace acceptance
}  // namespace purcell
