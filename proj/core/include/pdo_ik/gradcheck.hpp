/*
 * Copyright (C) 2026 PDO-IK Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include "pdo_ik/scenario.hpp"

namespace pdo_ik {

struct GradCheckOptions {
  int trials = 100;
  std::uint64_t seed = 0;
  /// When unset, every trial draws a random chain with 2..8 joints.
  std::optional<RobotModel> model;
  double step = 1e-6;  // central-difference step
};

struct GradCheckResult {
  /// max over trials and coordinates of |analytic - fd| / max(|fd|, |analytic|, 1e-3);
  /// the 1e-3 floor makes 1e-5 relative equivalent to a 1e-8 absolute floor.
  double max_error = 0.0;
  int trials = 0;
};

/// Random constrained problems (collisions, CoM boxes, decomposed joints,
/// random multipliers and penalties); compares the reverse-accumulation
/// gradient of the augmented Lagrangian against central finite differences.
/// Slack points landing within 1e-4 of a constraint activation are resampled
/// so the finite-difference oracle stays valid.
GradCheckResult run_gradient_check(const GradCheckOptions& options = {});

}  // namespace pdo_ik
