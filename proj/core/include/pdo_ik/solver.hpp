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

#include <string_view>

#include "pdo_ik/gradient.hpp"
#include "pdo_ik/lbfgs.hpp"

namespace pdo_ik {

struct SolverOptions {
  int k_max = 20;               // outer iterations
  double c_tol = 1e-4;          // constraint tolerance, m
  double beta = 0.99;           // stall contraction threshold
  double alpha = 10.0;          // penalty growth
  double rho0 = 1.0;
  double mu0 = 0.0;
  InnerOptions inner;
  double time_limit = 60.0;     // s
  std::optional<ComBox> com_box;
};

enum class SolveStatus { converged, constraint_stalled, time_limit, max_iterations };

std::string_view to_string(SolveStatus status);

struct SolveReport {
  Eigen::VectorXd theta;        // recovered joint angles, always within limits
  Eigen::VectorXd omega;        // slack variables at the returned iterate
  SolveStatus status = SolveStatus::max_iterations;
  double eps_d = 0.0;           // end-effector position error, m
  double eps_theta = 0.0;       // rotation error, rad (see pose_errors)
  double max_violation = 0.0;   // max(c') at the returned iterate
  int outer_iters = 0;
  int inner_iters = 0;          // L-BFGS iterations, summed over outer loops
  double wall_time = 0.0;       // s
};

struct PoseError {
  double position = 0.0;
  double rotation = 0.0;
};

/// Position error ||u_e - u*||; rotation error depends on the goal mode:
/// full relative-rotation angle for 6-DOF goals (n2 > 0), angle between the
/// x-axes for 5-DOF (n1 > 0, n2 = 0), and 0 for position-only goals.
PoseError pose_errors(const Transform& pose, const GoalSpec& goal);

/// theta_i = sum_m arccos(1 - L_im) + min(0, theta_i_min), clamped into
/// [theta_min, theta_max] to absorb floating-point dust. Angle-mode plans
/// recover theta_i = squash(omega_i) directly.
Eigen::VectorXd recover_angles(const SlackVector& omega,
                               const DecompositionPlan& plan);

/// Augmented-Lagrangian outer loop over the distance-parameterized chain.
/// Default start is omega = 0 (every sub-angle at its interval midpoint).
SolveReport solve_ik(const RobotModel& model, const DecompositionPlan& plan,
                     const GoalSpec& goal, const ObstacleCloud& obstacles,
                     const SolverOptions& options = {},
                     const std::optional<SlackVector>& omega0 = std::nullopt);

/// One slack per joint squashed to [theta_min, theta_max]; used by the
/// angle-space baseline solver.
DecompositionPlan angle_parameter_plan(const RobotModel& model);

/// Baseline: identical outer loop and line search, but the decision
/// variables parameterize joint angles directly and the chain uses the
/// trigonometric DH transform.
SolveReport solve_ik_angle_baseline(
    const RobotModel& model, const GoalSpec& goal, const ObstacleCloud& obstacles,
    const SolverOptions& options = {},
    const std::optional<Eigen::VectorXd>& theta0 = std::nullopt);

}  // namespace pdo_ik
