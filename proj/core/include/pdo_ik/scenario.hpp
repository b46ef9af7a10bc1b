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

#include <cstdint>

#include "pdo_ik/solver.hpp"

namespace pdo_ik {

/// Knobs for synthetic scenario generation. Obstacles are sphere/box surface
/// samples, scaled and placed uniformly, voxel-downsampled, and resampled
/// until collision-free against the ground-truth configuration.
struct ScenarioParams {
  int x_points = 1;             // n1 (default 5-DOF goals)
  int y_points = 0;             // n2
  double axis_scale = 1.0;      // k_p = q_p for every attached point
  double center_xy = 0.6;       // obstacle centers: x,y in [-center_xy, center_xy]
  double z_min = 0.0;
  double z_max = 1.2;
  double scale_min = 1.0;
  double scale_max = 3.0;
  double voxel_leaf = 0.1;      // m
  int max_attempts = 1000;      // per obstacle before giving up
  std::optional<ComBox> com_box;  // when set, theta_gt must keep the CoM inside
};

struct Scenario {
  int id = 0;
  std::uint64_t seed = 0;
  Eigen::VectorXd theta_gt;     // sampled reachable configuration
  GoalSpec goal;                // target pose = FK(theta_gt)
  ObstacleCloud obstacles;
};

/// Deterministic in (model, n_obstacles, seed, params). Throws
/// std::runtime_error if obstacle resampling exceeds max_attempts.
Scenario generate_scenario(const RobotModel& model, int n_obstacles,
                           std::uint64_t seed, const ScenarioParams& params = {});

/// One centroid per occupied cell of an axis-aligned grid anchored at the
/// origin; output sorted by cell index.
std::vector<Vec3> voxel_downsample(const std::vector<Vec3>& points, double leaf);

struct CollisionCheck {
  bool collision_free = true;
  double margin = std::numeric_limits<double>::infinity();
};

/// Evaluation oracle, independent of the solver's spheroid formulation:
/// joint spheres plus capsules per link (segment u_i -> u_{i+1}, radius
/// max(r_i, r_{i+1})), exact point-to-segment distances, trig-DH forward
/// kinematics. Collision = strict interior penetration (margin < 0).
CollisionCheck independent_collision_check(const RobotModel& model,
                                           const Eigen::VectorXd& theta,
                                           const ObstacleCloud& obstacles);

struct EvalTolerances {
  double pos = 0.01;            // m
  double rot = 0.01;            // rad
  double joint_fraction = 0.01; // allowed violation as a fraction of range
  double time_limit = 60.0;     // s
};

struct Verdict {
  bool success = false;
  bool within_time = false;
  bool collision_free = false;
  bool pose_ok = false;
  bool joint_ok = false;
  double eps_d = 0.0;
  double eps_theta = 0.0;
  double joint_violation = 0.0; // worst violation as a fraction of range
  double margin = 0.0;          // worst capsule-checker margin
};

/// Scores a solve with the independent checker and trig-DH pose errors;
/// never calls solver-side constraint code.
Verdict evaluate_solution(const RobotModel& model, const Scenario& scenario,
                          const SolveReport& report,
                          const EvalTolerances& tol = {});

/// Random serial chain for gradient checks and property tests: mixed wide
/// and narrow limits (wide ones trigger angle decomposition), valid
/// spheroids, and mass data on every joint.
RobotModel make_random_chain(std::uint64_t seed, int joints);

}  // namespace pdo_ik
