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

#include <functional>

#include "pdo_ik/rollout.hpp"

namespace pdo_ik {

/// Adjoint seeds for the backward pass: one matrix per joint frame
/// (collision and CoM contributions) plus the end-effector seed.
struct AdjointSet {
  std::vector<Eigen::Matrix4d> frame;
  Eigen::Matrix4d ee = Eigen::Matrix4d::Zero();

  explicit AdjointSet(int joints)
      : frame(static_cast<size_t>(joints), Eigen::Matrix4d::Zero()) {}
};

/// dJ/dT_e. Columns: sum k_p (w_ep - w*_p), sum q_p (v_ep - v*_p), zero,
/// and the full origin derivative (u_e - u*) + sum(w residuals) + sum(v
/// residuals). Bottom row zero; a constant entry there cannot reach the
/// slack gradient.
Eigen::Matrix4d objective_seed(const RolloutTrace& trace, const GoalSpec& goal);

/// Adds the penalty derivatives of violated collision constraints into the
/// translation columns of the per-joint seeds. Gated on c > 0; a coincident
/// obstacle point contributes a zero direction.
void collision_seeds(const RolloutTrace& trace,
                     const Eigen::VectorXd& constraints,
                     const ObstacleCloud& obstacles, const RobotModel& model,
                     const ALState& al, AdjointSet& seeds);

/// Adds the penalty derivatives of violated CoM box constraints. The CoM
/// block starts at mu index block_offset.
void com_seeds(const RolloutTrace& trace, const Eigen::VectorXd& constraints,
               const RobotModel& model, const ComBox& box, const ALState& al,
               int block_offset, AdjointSet& seeds);

/// Reverse accumulation along the chain: propagates frame adjoints backward,
/// contracts each slot with the local-transform derivative and the squash
/// derivative, and returns the slack gradient. Reuses the forward trace; no
/// forward transform is recomputed.
Eigen::VectorXd backward_pass(const RolloutTrace& trace, const AdjointSet& seeds,
                              const RobotModel& model,
                              const DecompositionPlan& plan);

/// Full gradient of the augmented Lagrangian at a completed forward pass.
Eigen::VectorXd lagrangian_gradient(const RobotModel& model,
                                    const DecompositionPlan& plan,
                                    const RolloutResult& rollout,
                                    const GoalSpec& goal,
                                    const ObstacleCloud& obstacles,
                                    const ALState& al,
                                    const std::optional<ComBox>& com_box = std::nullopt);

/// Central differences (f(x + h e_k) - f(x - h e_k)) / 2h per coordinate.
Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h);

}  // namespace pdo_ik
