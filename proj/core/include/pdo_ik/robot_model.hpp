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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdo_ik/types.hpp"

namespace pdo_ik {

/// Proximal (modified) DH parameters of one joint: alpha_{i-1}, a_{i-1}, d_i.
/// Angles in radians, lengths in meters.
struct DHRow {
  double alpha = 0.0;
  double a = 0.0;
  double d = 0.0;
};

struct JointSpec {
  DHRow dh;
  double theta_min = 0.0;
  double theta_max = 0.0;
  /// Collision sphere radius around the joint origin.
  double radius = 0.0;
  /// Semi-major axis of the prolate spheroid bounding the outgoing link.
  double link_semi_major = 0.0;
  std::optional<double> mass;                // kg
  std::optional<Transform> com_offset;       // link CoM in the joint frame
};

/// Serial chain of revolute joints. Immutable after construction; safe to
/// share across threads.
struct RobotModel {
  std::string name;
  Transform base_transform = Transform::Identity();
  std::vector<JointSpec> joints;
  Transform ee_offset = Transform::Identity();

  int dof() const { return static_cast<int>(joints.size()); }
  bool has_mass_data() const;

  /// Distance between the origins of joints i and i+1 (0-based, i < dof()-1).
  /// Constant over configurations: the translation of a DH factor does not
  /// depend on the joint angle.
  double link_rest_length(int i) const;
};

/// Parse a robot description document (JSON, schema in the README).
/// Throws std::invalid_argument on parse or validation failure, naming the
/// offending joint/field.
RobotModel load_robot(const std::string& json_text);
RobotModel load_robot_file(const std::string& path);

/// Checks all model invariants; throws std::invalid_argument on violation.
void validate_model(const RobotModel& model);

/// Per-joint split of the motion range into sub-angles that each fit within
/// [0, pi], plus the squash bounds of every resulting slack variable.
///
/// In distance mode a slot's bounds are squared-distance bounds in [0, 2];
/// the angle-parameterized baseline reuses the same structure with bounds in
/// radians and one slot per joint.
struct DecompositionPlan {
  enum class Param { distance, angle };
  Param param = Param::distance;

  std::vector<int> joint_of;    // per slot: owning joint
  std::vector<double> lower;    // per slot: squash lower bound
  std::vector<double> upper;    // per slot: squash upper bound
  std::vector<int> first;       // per joint: first slot index
  std::vector<int> count;       // per joint: number of sub-angles K_i
  std::vector<double> shift;    // per joint: s_i = min(0, theta_min)

  /// Total number of slack variables M'.
  int size() const { return static_cast<int>(joint_of.size()); }
};

/// Builds the distance-mode plan: shift s_i = min(0, theta_min), K_i =
/// ceil((theta_max - s_i)/pi), equal division of the shifted range, and
/// L bounds via L = 1 - cos(theta_sub).
DecompositionPlan plan_decomposition(const RobotModel& model);

}  // namespace pdo_ik
