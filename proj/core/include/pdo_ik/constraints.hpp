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

#include <limits>
#include <optional>
#include <string>

#include "pdo_ik/kinematics.hpp"

namespace pdo_ik {

/// Workspace obstacles as a plain cluster of points (meters).
struct ObstacleCloud {
  std::vector<Vec3> points;

  int size() const { return static_cast<int>(points.size()); }
  bool empty() const { return points.empty(); }
};

/// Parses "x y z" per line; '#' starts a comment, blank lines are skipped.
ObstacleCloud load_obstacles(const std::string& text);
ObstacleCloud load_obstacles_file(const std::string& path);

/// Joint-sphere clearance c = r - ||u - o||. c <= 0 iff the point lies
/// outside the sphere. Well-defined (returns r) for u == o.
double joint_clearance(const Vec3& u, const Vec3& o, double radius);

/// Link-spheroid clearance c = 2a - (||u - o|| + ||u_next - o||). c <= 0 iff
/// the point lies outside the prolate spheroid with foci u, u_next and
/// semi-major axis a.
double link_clearance(const Vec3& u, const Vec3& u_next, const Vec3& o,
                      double semi_major);

/// J = 1/2 * sum of squared entrywise differences. Throws
/// std::invalid_argument on shape mismatch.
double ee_objective(const PointMatrix& ee_points, const PointMatrix& goal_points);

/// Axis-aligned feasible box for the aggregate center of mass.
struct ComBox {
  Vec3 lower;
  Vec3 upper;
};

/// Mass-weighted mean of the per-link CoM positions, normalized by total
/// mass. Requires mass data on every joint.
Vec3 aggregate_com(const RolloutTrace& trace, const RobotModel& model);

/// Box-violation values (lower - c) and (c - upper) per axis, positive =
/// violated. Order: lower x,y,z then upper x,y,z.
Eigen::Matrix<double, 6, 1> com_constraints(const RolloutTrace& trace,
                                            const RobotModel& model,
                                            const ComBox& box);

/// M*N joint constraints, then (M-1)*N link constraints, then 6 CoM values
/// when enabled. Within each block the obstacle index varies fastest.
int constraint_count(int joints, int obstacle_points, bool com_enabled);

Eigen::VectorXd assemble_constraints(const RolloutTrace& trace,
                                     const ObstacleCloud& obstacles,
                                     const RobotModel& model,
                                     const std::optional<ComBox>& com_box);

/// Augmented-Lagrangian bookkeeping carried across outer iterations.
struct ALState {
  Eigen::VectorXd mu;        // multipliers, aligned with the constraint vector
  double rho = 1.0;          // penalty weight
  double c_last = std::numeric_limits<double>::infinity();
};

/// L_rho = J + mu^T c' + (rho/2) c'^T c' with c' = max(0, c) elementwise.
/// Throws std::invalid_argument if mu and c sizes disagree.
double augmented_lagrangian(double objective, const Eigen::VectorXd& constraints,
                            const ALState& al);

}  // namespace pdo_ik
