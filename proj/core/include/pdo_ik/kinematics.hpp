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

#include <vector>

#include "pdo_ik/robot_model.hpp"

namespace pdo_ik {

/// Numerically stable logistic function, codomain (0, 1).
double sigmoid(double x);

/// Inverse of sigmoid(); diverges as p approaches 0 or 1.
double sigmoid_inverse(double p);

/// Maps an unconstrained slack to the open interval (lo, hi):
///   s(w) = (hi - lo) * sigmoid(w) + lo.
/// The result is clamped to the nearest representable value strictly inside
/// the interval, so saturation can never land exactly on a bound.
double squash(double omega, double lo, double hi);

/// d squash / d omega = (hi - lo) * sigma * (1 - sigma) > 0.
double squash_derivative(double omega, double lo, double hi);

/// Trigonometric proximal-DH transform f(theta; alpha, a, d).
Transform dh_transform(double theta, const DHRow& dh);

/// Entrywise derivative of dh_transform with respect to theta.
Eigen::Matrix4d dh_theta_derivative(double theta, const DHRow& dh);

/// Distance-parameterized DH transform g(L; alpha, a, d) with
/// cos(theta) = 1 - L and sin(theta) = sqrt(2L - L^2).
/// Throws std::domain_error if L is outside [0, 2].
Transform g_transform(double L, const DHRow& dh);

/// Entrywise derivative dg/dL. L is clamped to [1e-9, 2 - 1e-9] so the
/// (2L - L^2)^{-1/2} terms stay finite at the endpoints.
Eigen::Matrix4d g_derivative(double L, const DHRow& dh);

/// End-effector pose target expressed as points: the frame origin plus
/// n1 points along the x-axis (scales k_p) and n2 along the y-axis (q_p).
/// n2 > 0 requires n1 > 0; all scales nonzero.
struct GoalSpec {
  Transform target = Transform::Identity();
  std::vector<double> x_scales;
  std::vector<double> y_scales;

  int point_count() const {
    return 1 + static_cast<int>(x_scales.size() + y_scales.size());
  }
  /// U*: the attachment points evaluated on the target frame.
  PointMatrix goal_points() const;
};

/// Throws std::invalid_argument if the goal violates its invariants.
void validate_goal(const GoalSpec& goal);

/// Rows: u_e, then the n1 x-axis points, then the n2 y-axis points.
PointMatrix end_effector_points(const Transform& ee, const GoalSpec& goal);

/// Forward pass cache. `values` holds L (distance mode) or theta (angle
/// mode) per slot; `world[t]` is the cumulative transform after slot t.
struct RolloutTrace {
  DecompositionPlan::Param param = DecompositionPlan::Param::distance;
  std::vector<double> values;
  std::vector<double> dvalue_dslack;        // squash derivative per slot
  std::vector<Transform> local;             // per slot
  std::vector<Transform> world;             // per slot, cumulative
  std::vector<Transform> joint_pre;         // per joint: constant factor f(s_i; dh)
  std::vector<int> joint_slot;              // per joint: last slot index
  PointMatrix joint_points;                 // u_i, one row per joint
  Transform ee = Transform::Identity();     // T_e = T_M * ee_offset
  PointMatrix ee_points;                    // U_e

  const Transform& joint_transform(int joint) const {
    return world[static_cast<size_t>(joint_slot[static_cast<size_t>(joint)])];
  }
};

/// Kinematics-only rollout: populates the trace (frames, joint points,
/// end-effector points) without touching constraints.
RolloutTrace rollout_kinematics(const RobotModel& model,
                                const DecompositionPlan& plan,
                                const SlackVector& slack,
                                const GoalSpec& goal);

/// Warm-start inverse of the recovery formula: equal split of the shifted
/// angle across sub-angles, then the logit of the normalized value.
/// Throws std::domain_error if any theta lies on or outside its limits.
SlackVector angle_to_slack(const Eigen::VectorXd& theta,
                           const DecompositionPlan& plan);

/// Trig-DH forward kinematics: world transform of every joint frame.
std::vector<Transform> forward_frames(const RobotModel& model,
                                      const Eigen::VectorXd& theta);

/// Trig-DH end-effector pose (includes ee_offset).
Transform forward_pose(const RobotModel& model, const Eigen::VectorXd& theta);

namespace detail {
/// Number of g_transform() evaluations since process start. Used by tests to
/// assert that the backward pass reuses the forward trace.
long g_transform_calls();
}  // namespace detail

}  // namespace pdo_ik
