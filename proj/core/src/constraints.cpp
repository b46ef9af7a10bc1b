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
#include "pdo_ik/constraints.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace pdo_ik {

ObstacleCloud load_obstacles(const std::string& text) {
  ObstacleCloud cloud;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double x, y, z;
    if (fields >> x >> y >> z) {
      double extra;
      if (fields >> extra)
        throw std::invalid_argument("obstacle cloud: line " + std::to_string(line_no) +
                                    ": expected exactly three numbers");
      cloud.points.emplace_back(x, y, z);
    } else {
      std::string token;
      std::istringstream probe(line);
      if (probe >> token)
        throw std::invalid_argument("obstacle cloud: line " + std::to_string(line_no) +
                                    ": malformed point");
    }
  }
  return cloud;
}

ObstacleCloud load_obstacles_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("obstacle cloud: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_obstacles(buffer.str());
}

double joint_clearance(const Vec3& u, const Vec3& o, double radius) {
  return radius - (u - o).norm();
}

double link_clearance(const Vec3& u, const Vec3& u_next, const Vec3& o, double semi_major) {
  return 2.0 * semi_major - ((u - o).norm() + (u_next - o).norm());
}

double ee_objective(const PointMatrix& ee_points, const PointMatrix& goal_points) {
  if (ee_points.rows() != goal_points.rows())
    throw std::invalid_argument("ee_objective: point matrices differ in shape");
  return 0.5 * (ee_points - goal_points).squaredNorm();
}

Vec3 aggregate_com(const RolloutTrace& trace, const RobotModel& model) {
  if (!model.has_mass_data())
    throw std::invalid_argument("CoM: every joint needs mass and com_offset");
  Vec3 weighted = Vec3::Zero();
  double total = 0.0;
  for (int i = 0; i < model.dof(); ++i) {
    const JointSpec& j = model.joints[static_cast<size_t>(i)];
    const Transform& t = trace.joint_transform(i);
    const Vec3 com = t.block<3, 3>(0, 0) * translation(*j.com_offset) + translation(t);
    weighted += *j.mass * com;
    total += *j.mass;
  }
  return weighted / total;
}

Eigen::Matrix<double, 6, 1> com_constraints(const RolloutTrace& trace,
                                            const RobotModel& model, const ComBox& box) {
  const Vec3 com = aggregate_com(trace, model);
  Eigen::Matrix<double, 6, 1> values;
  values.head<3>() = box.lower - com;
  values.tail<3>() = com - box.upper;
  return values;
}

int constraint_count(int joints, int obstacle_points, bool com_enabled) {
  return joints * obstacle_points + (joints - 1) * obstacle_points +
         (com_enabled ? 6 : 0);
}

Eigen::VectorXd assemble_constraints(const RolloutTrace& trace,
                                     const ObstacleCloud& obstacles,
                                     const RobotModel& model,
                                     const std::optional<ComBox>& com_box) {
  const int m = model.dof();
  const int n = obstacles.size();
  Eigen::VectorXd c(constraint_count(m, n, com_box.has_value()));
  int idx = 0;
  for (int i = 0; i < m; ++i) {
    const Vec3 u = trace.joint_points.row(i);
    const double r = model.joints[static_cast<size_t>(i)].radius;
    for (int j = 0; j < n; ++j)
      c[idx++] = joint_clearance(u, obstacles.points[static_cast<size_t>(j)], r);
  }
  for (int i = 0; i + 1 < m; ++i) {
    const Vec3 u = trace.joint_points.row(i);
    const Vec3 u_next = trace.joint_points.row(i + 1);
    const double a = model.joints[static_cast<size_t>(i)].link_semi_major;
    for (int j = 0; j < n; ++j)
      c[idx++] = link_clearance(u, u_next, obstacles.points[static_cast<size_t>(j)], a);
  }
  if (com_box) c.segment<6>(idx) = com_constraints(trace, model, *com_box);
  return c;
}

double augmented_lagrangian(double objective, const Eigen::VectorXd& constraints,
                            const ALState& al) {
  if (al.mu.size() != constraints.size())
    throw std::invalid_argument("augmented_lagrangian: mu is not aligned with c");
  double value = objective;
  for (Eigen::Index k = 0; k < constraints.size(); ++k) {
    const double violated = std::max(0.0, constraints[k]);
    value += al.mu[k] * violated + 0.5 * al.rho * violated * violated;
  }
  return value;
}

}  // namespace pdo_ik
