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

#include "pdo_ik/constraints.hpp"

namespace pdo_ik {

struct RolloutResult {
  RolloutTrace trace;
  double objective = 0.0;        // J
  double value = 0.0;            // L_rho
  Eigen::VectorXd constraints;   // signed c, fixed ordering
};

/// Single propagative pass base -> end effector: frames, joint points,
/// end-effector points, objective, constraint values, and the augmented
/// Lagrangian. The trace is reusable by the backward pass.
/// al.mu must be sized to the constraint count.
RolloutResult forward_rollout(const RobotModel& model,
                              const DecompositionPlan& plan,
                              const SlackVector& slack, const GoalSpec& goal,
                              const ObstacleCloud& obstacles, const ALState& al,
                              const std::optional<ComBox>& com_box = std::nullopt);

}  // namespace pdo_ik
