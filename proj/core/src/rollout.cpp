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
#include "pdo_ik/rollout.hpp"

namespace pdo_ik {

RolloutResult forward_rollout(const RobotModel& model, const DecompositionPlan& plan,
                              const SlackVector& slack, const GoalSpec& goal,
                              const ObstacleCloud& obstacles, const ALState& al,
                              const std::optional<ComBox>& com_box) {
  RolloutResult result;
  result.trace = rollout_kinematics(model, plan, slack, goal);
  result.objective = ee_objective(result.trace.ee_points, goal.goal_points());
  result.constraints = assemble_constraints(result.trace, obstacles, model, com_box);
  result.value = augmented_lagrangian(result.objective, result.constraints, al);
  return result;
}

}  // namespace pdo_ik
