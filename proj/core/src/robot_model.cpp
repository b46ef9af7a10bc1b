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
#include "pdo_ik/robot_model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pdo_ik {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("robot config: " + what);
}

double require_number(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + ": missing field '" + key + "'");
  if (!it->is_number()) fail(where + ": field '" + key + "' must be a number");
  return it->get<double>();
}

Transform parse_transform(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 16)
    fail(where + ": expected 16 numbers, row-major");
  Transform t;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const auto& e = value[static_cast<size_t>(4 * r + c)];
      if (!e.is_number()) fail(where + ": entries must be numbers");
      t(r, c) = e.get<double>();
    }
  return t;
}

}  // namespace

bool is_rigid_transform(const Transform& t, double tol) {
  if (t(3, 0) != 0.0 || t(3, 1) != 0.0 || t(3, 2) != 0.0 || t(3, 3) != 1.0)
    return false;
  if (!t.allFinite()) return false;
  const Eigen::Matrix3d r = t.block<3, 3>(0, 0);
  if (((r.transpose() * r) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol)
    return false;
  return r.determinant() > 0.0;
}

bool RobotModel::has_mass_data() const {
  for (const auto& j : joints)
    if (!j.mass || !j.com_offset) return false;
  return !joints.empty();
}

double RobotModel::link_rest_length(int i) const {
  // The translation column of joint (i+1)'s DH factor is (a, d*sin, d*cos);
  // its norm hypot(a, d) is the focal distance of link i's spheroid.
  const DHRow& next = joints[static_cast<size_t>(i) + 1].dh;
  return std::hypot(next.a, next.d);
}

void validate_model(const RobotModel& model) {
  if (model.joints.empty()) fail("model must have at least one joint");
  if (!is_rigid_transform(model.base_transform)) fail("base_transform is not a rigid transform");
  if (!is_rigid_transform(model.ee_offset)) fail("ee_offset is not a rigid transform");

  const int m = model.dof();
  for (int i = 0; i < m; ++i) {
    const JointSpec& j = model.joints[static_cast<size_t>(i)];
    const std::string where = "joints[" + std::to_string(i) + "]";
    if (!std::isfinite(j.dh.alpha) || !std::isfinite(j.dh.a) || !std::isfinite(j.dh.d))
      fail(where + ": DH parameters must be finite");
    if (!std::isfinite(j.theta_min) || !std::isfinite(j.theta_max) ||
        j.theta_min >= j.theta_max)
      fail(where + ": requires theta_min < theta_max");
    if (!(j.radius >= 0.0)) fail(where + ": radius must be >= 0");
    if (!std::isfinite(j.link_semi_major)) fail(where + ": link_semi_major must be finite");
    if (j.com_offset && !is_rigid_transform(*j.com_offset))
      fail(where + ": com_offset is not a rigid transform");
    if (j.mass && !(*j.mass > 0.0)) fail(where + ": mass must be > 0");
  }
  // Spheroid feasibility: the semi-major axis must reach at least half the
  // (configuration-independent) distance between consecutive joint origins,
  // or the constraint is violated for every configuration.
  for (int i = 0; i + 1 < m; ++i) {
    const double half = 0.5 * model.link_rest_length(i);
    const JointSpec& j = model.joints[static_cast<size_t>(i)];
    if (j.link_semi_major < half) {
      std::ostringstream msg;
      msg << "joints[" << i << "]: link_semi_major " << j.link_semi_major
          << " is below half the inter-joint distance " << half
          << " (degenerate spheroid)";
      fail(msg.str());
    }
  }
}

RobotModel load_robot(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");

  RobotModel model;
  model.name = doc.value("name", std::string{});
  if (doc.contains("base_transform"))
    model.base_transform = parse_transform(doc["base_transform"], "base_transform");
  if (doc.contains("ee_offset"))
    model.ee_offset = parse_transform(doc["ee_offset"], "ee_offset");

  auto joints_it = doc.find("joints");
  if (joints_it == doc.end() || !joints_it->is_array())
    fail("missing 'joints' array");
  int index = 0;
  for (const auto& entry : *joints_it) {
    const std::string where = "joints[" + std::to_string(index) + "]";
    if (!entry.is_object()) fail(where + ": must be an object");
    JointSpec j;
    j.dh.alpha = require_number(entry, "alpha", where);
    j.dh.a = require_number(entry, "a", where);
    j.dh.d = require_number(entry, "d", where);
    j.theta_min = require_number(entry, "theta_min", where);
    j.theta_max = require_number(entry, "theta_max", where);
    j.radius = require_number(entry, "radius", where);
    j.link_semi_major = require_number(entry, "link_semi_major", where);
    if (entry.contains("mass")) j.mass = require_number(entry, "mass", where);
    if (entry.contains("com_offset"))
      j.com_offset = parse_transform(entry["com_offset"], where + ".com_offset");
    model.joints.push_back(j);
    ++index;
  }

  validate_model(model);
  return model;
}

RobotModel load_robot_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_robot(buffer.str());
}

DecompositionPlan plan_decomposition(const RobotModel& model) {
  constexpr double pi = std::numbers::pi;
  DecompositionPlan plan;
  plan.param = DecompositionPlan::Param::distance;

  for (int i = 0; i < model.dof(); ++i) {
    const JointSpec& j = model.joints[static_cast<size_t>(i)];
    const double s = std::min(0.0, j.theta_min);
    const double width_max = j.theta_max - s;  // shifted upper bound, > 0
    const int k = std::max(1, static_cast<int>(std::ceil(width_max / pi - 1e-12)));
    const double sub_lo = (j.theta_min - s) / k;
    const double sub_hi = width_max / k;

    plan.shift.push_back(s);
    plan.count.push_back(k);
    plan.first.push_back(plan.size());
    for (int m2 = 0; m2 < k; ++m2) {
      plan.joint_of.push_back(i);
      plan.lower.push_back(1.0 - std::cos(sub_lo));
      plan.upper.push_back(1.0 - std::cos(sub_hi));
    }
  }
  return plan;
}

}  // namespace pdo_ik
