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
#include "pdo_ik/scenario.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace pdo_ik {

namespace {

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

Vec3 com_from_frames(const std::vector<Transform>& frames, const RobotModel& model) {
  Vec3 weighted = Vec3::Zero();
  double total = 0.0;
  for (int i = 0; i < model.dof(); ++i) {
    const JointSpec& j = model.joints[static_cast<size_t>(i)];
    const Transform& t = frames[static_cast<size_t>(i)];
    weighted += *j.mass * (t.block<3, 3>(0, 0) * translation(*j.com_offset) + translation(t));
    total += *j.mass;
  }
  return weighted / total;
}

std::vector<Vec3> sample_sphere_surface(std::mt19937_64& rng, const Vec3& center,
                                        double radius, int samples) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec3> points;
  points.reserve(static_cast<size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
    const double norm = dir.norm();
    if (norm < 1e-12) {
      --i;
      continue;
    }
    points.push_back(center + radius * dir / norm);
  }
  return points;
}

std::vector<Vec3> sample_box_surface(std::mt19937_64& rng, const Vec3& center,
                                     const Vec3& half, int samples) {
  // Pick a face proportional to its area, then a uniform point on it.
  const double areas[3] = {half.y() * half.z(), half.x() * half.z(), half.x() * half.y()};
  const double total = 2.0 * (areas[0] + areas[1] + areas[2]);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<Vec3> points;
  points.reserve(static_cast<size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    double pick = uniform(rng) * total;
    int axis = 0;
    double sign = 1.0;
    for (int a = 0; a < 3; ++a) {
      if (pick < areas[a]) { axis = a; sign = 1.0; break; }
      pick -= areas[a];
      if (pick < areas[a]) { axis = a; sign = -1.0; break; }
      pick -= areas[a];
    }
    Vec3 p;
    p[axis] = sign * half[axis];
    const int u = (axis + 1) % 3, v = (axis + 2) % 3;
    p[u] = (2.0 * uniform(rng) - 1.0) * half[u];
    p[v] = (2.0 * uniform(rng) - 1.0) * half[v];
    points.push_back(center + p);
  }
  return points;
}

}  // namespace

std::vector<Vec3> voxel_downsample(const std::vector<Vec3>& points, double leaf) {
  if (!(leaf > 0.0)) throw std::invalid_argument("voxel_downsample: leaf must be > 0");
  struct Cell { Vec3 sum = Vec3::Zero(); int count = 0; };
  std::map<std::array<std::int64_t, 3>, Cell> grid;
  for (const Vec3& p : points) {
    const std::array<std::int64_t, 3> key = {
        static_cast<std::int64_t>(std::floor(p.x() / leaf)),
        static_cast<std::int64_t>(std::floor(p.y() / leaf)),
        static_cast<std::int64_t>(std::floor(p.z() / leaf))};
    Cell& cell = grid[key];
    cell.sum += p;
    cell.count += 1;
  }
  std::vector<Vec3> out;
  out.reserve(grid.size());
  for (const auto& [key, cell] : grid) out.push_back(cell.sum / cell.count);
  return out;
}

CollisionCheck independent_collision_check(const RobotModel& model,
                                           const Eigen::VectorXd& theta,
                                           const ObstacleCloud& obstacles) {
  CollisionCheck check;
  if (obstacles.empty()) return check;

  const auto frames = forward_frames(model, theta);
  const int m = model.dof();
  std::vector<Vec3> joints(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) joints[static_cast<size_t>(i)] = translation(frames[static_cast<size_t>(i)]);

  for (const Vec3& o : obstacles.points) {
    for (int i = 0; i < m; ++i) {
      const double margin =
          (o - joints[static_cast<size_t>(i)]).norm() - model.joints[static_cast<size_t>(i)].radius;
      check.margin = std::min(check.margin, margin);
    }
    for (int i = 0; i + 1 < m; ++i) {
      const double radius = std::max(model.joints[static_cast<size_t>(i)].radius,
                                     model.joints[static_cast<size_t>(i) + 1].radius);
      const double margin =
          point_segment_distance(o, joints[static_cast<size_t>(i)], joints[static_cast<size_t>(i) + 1]) -
          radius;
      check.margin = std::min(check.margin, margin);
    }
  }
  check.collision_free = check.margin >= 0.0;  // boundary contact is not a collision
  return check;
}

Scenario generate_scenario(const RobotModel& model, int n_obstacles,
                           std::uint64_t seed, const ScenarioParams& params) {
  if (n_obstacles < 0)
    throw std::invalid_argument("generate_scenario: n_obstacles must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Scenario scenario;
  scenario.seed = seed;

  // Ground-truth configuration, uniform over the joint-limit box; with a CoM
  // box, reject configurations whose aggregate CoM falls outside.
  const int m = model.dof();
  scenario.theta_gt.resize(m);
  for (int attempt = 0;; ++attempt) {
    if (attempt >= params.max_attempts)
      throw std::runtime_error("generate_scenario: no CoM-feasible configuration found");
    for (int i = 0; i < m; ++i) {
      const JointSpec& j = model.joints[static_cast<size_t>(i)];
      scenario.theta_gt[i] = j.theta_min + uniform(rng) * (j.theta_max - j.theta_min);
    }
    if (!params.com_box) break;
    const Vec3 com = com_from_frames(forward_frames(model, scenario.theta_gt), model);
    if ((com.array() >= params.com_box->lower.array()).all() &&
        (com.array() <= params.com_box->upper.array()).all())
      break;
  }

  scenario.goal.target = forward_pose(model, scenario.theta_gt);
  scenario.goal.x_scales.assign(static_cast<size_t>(params.x_points), params.axis_scale);
  scenario.goal.y_scales.assign(static_cast<size_t>(params.y_points), params.axis_scale);

  std::uniform_real_distribution<double> xy(-params.center_xy, params.center_xy);
  std::uniform_real_distribution<double> zs(params.z_min, params.z_max);
  std::uniform_real_distribution<double> scales(params.scale_min, params.scale_max);

  for (int obstacle = 0; obstacle < n_obstacles; ++obstacle) {
    bool placed = false;
    for (int attempt = 0; attempt < params.max_attempts && !placed; ++attempt) {
      const Vec3 center(xy(rng), xy(rng), zs(rng));
      const double scale = scales(rng);
      const bool sphere = uniform(rng) < 0.5;
      std::vector<Vec3> surface;
      if (sphere) {
        surface = sample_sphere_surface(rng, center, 0.06 * scale, 512);
      } else {
        const Vec3 half(scale * (0.03 + 0.05 * uniform(rng)),
                        scale * (0.03 + 0.05 * uniform(rng)),
                        scale * (0.03 + 0.05 * uniform(rng)));
        surface = sample_box_surface(rng, center, half, 512);
      }
      surface = voxel_downsample(surface, params.voxel_leaf);
      ObstacleCloud candidate;
      candidate.points = surface;
      if (independent_collision_check(model, scenario.theta_gt, candidate).collision_free) {
        scenario.obstacles.points.insert(scenario.obstacles.points.end(),
                                         surface.begin(), surface.end());
        placed = true;
      }
    }
    if (!placed)
      throw std::runtime_error("generate_scenario: obstacle resampling exceeded " +
                               std::to_string(params.max_attempts) +
                               " attempts (overcrowded workspace)");
  }
  return scenario;
}

Verdict evaluate_solution(const RobotModel& model, const Scenario& scenario,
                          const SolveReport& report, const EvalTolerances& tol) {
  Verdict verdict;
  verdict.within_time =
      report.status != SolveStatus::time_limit && report.wall_time <= tol.time_limit;

  const CollisionCheck check =
      independent_collision_check(model, report.theta, scenario.obstacles);
  verdict.collision_free = check.collision_free;
  verdict.margin = check.margin;

  const PoseError pose = pose_errors(forward_pose(model, report.theta), scenario.goal);
  verdict.eps_d = pose.position;
  verdict.eps_theta = pose.rotation;
  verdict.pose_ok = pose.position < tol.pos && pose.rotation < tol.rot;

  verdict.joint_violation = 0.0;
  for (int i = 0; i < model.dof(); ++i) {
    const JointSpec& j = model.joints[static_cast<size_t>(i)];
    const double over = std::max(
        {0.0, j.theta_min - report.theta[i], report.theta[i] - j.theta_max});
    verdict.joint_violation =
        std::max(verdict.joint_violation, over / (j.theta_max - j.theta_min));
  }
  verdict.joint_ok = verdict.joint_violation <= tol.joint_fraction;

  verdict.success = verdict.within_time && verdict.collision_free &&
                    verdict.pose_ok && verdict.joint_ok;
  return verdict;
}

RobotModel make_random_chain(std::uint64_t seed, int joints) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const auto range = [&](double lo, double hi) { return lo + uniform(rng) * (hi - lo); };
  constexpr double pi = std::numbers::pi;

  RobotModel model;
  model.name = "random-" + std::to_string(seed);
  for (int i = 0; i < joints; ++i) {
    JointSpec j;
    j.dh.alpha = range(-pi, pi);
    j.dh.a = (uniform(rng) < 0.3) ? 0.0 : range(0.05, 0.3);
    j.dh.d = (uniform(rng) < 0.3) ? 0.0 : range(0.05, 0.3);
    if (uniform(rng) < 0.4) {
      // Wide limits: width > pi forces angle decomposition.
      j.theta_min = -range(3.0, 2.0 * pi);
      j.theta_max = range(3.0, 2.0 * pi);
    } else {
      const double center = range(-1.0, 1.0);
      const double half_width = range(0.4, 1.5);
      j.theta_min = center - half_width;
      j.theta_max = center + half_width;
    }
    j.radius = range(0.02, 0.08);
    j.mass = range(0.5, 3.0);
    Transform com = Transform::Identity();
    Vec3 axis(uniform(rng) - 0.5, uniform(rng) - 0.5, uniform(rng) - 0.5);
    if (axis.norm() < 1e-9) axis = Vec3::UnitZ();
    com.block<3, 3>(0, 0) =
        Eigen::AngleAxisd(range(-pi, pi), axis.normalized()).toRotationMatrix();
    com.block<3, 1>(0, 3) = Vec3(range(-0.1, 0.1), range(-0.1, 0.1), range(-0.1, 0.1));
    j.com_offset = com;
    model.joints.push_back(j);
  }
  // Semi-majors depend on the next joint's DH row; assign after the fact.
  for (int i = 0; i < joints; ++i) {
    double half = 0.0;
    if (i + 1 < joints) half = 0.5 * model.link_rest_length(i);
    model.joints[static_cast<size_t>(i)].link_semi_major = half + range(0.05, 0.2);
  }
  validate_model(model);
  return model;
}

}  // namespace pdo_ik
