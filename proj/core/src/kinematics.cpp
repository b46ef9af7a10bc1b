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
#include "pdo_ik/kinematics.hpp"

#include <atomic>
#include <cmath>

namespace pdo_ik {

namespace {
std::atomic<long> g_transform_counter{0};
}

namespace detail {
long g_transform_calls() { return g_transform_counter.load(std::memory_order_relaxed); }
}  // namespace detail

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double sigmoid_inverse(double p) { return std::log(p / (1.0 - p)); }

double squash(double omega, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("squash: requires lo < hi");
  const double value = (hi - lo) * sigmoid(omega) + lo;
  // Saturation can round onto a bound; keep the codomain an open interval.
  const double lo_open = std::nextafter(lo, hi);
  const double hi_open = std::nextafter(hi, lo);
  return std::clamp(value, lo_open, hi_open);
}

double squash_derivative(double omega, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("squash_derivative: requires lo < hi");
  const double s = sigmoid(omega);
  return (hi - lo) * s * (1.0 - s);
}

Transform dh_transform(double theta, const DHRow& dh) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(dh.alpha), sa = std::sin(dh.alpha);
  Transform t;
  t << ct, -st, 0.0, dh.a,
       st * ca, ct * ca, -sa, dh.d * sa,
       st * sa, ct * sa, ca, dh.d * ca,
       0.0, 0.0, 0.0, 1.0;
  return t;
}

Eigen::Matrix4d dh_theta_derivative(double theta, const DHRow& dh) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(dh.alpha), sa = std::sin(dh.alpha);
  Eigen::Matrix4d t;
  t << -st, -ct, 0.0, 0.0,
       ct * ca, -st * ca, 0.0, 0.0,
       ct * sa, -st * sa, 0.0, 0.0,
       0.0, 0.0, 0.0, 0.0;
  return t;
}

Transform g_transform(double L, const DHRow& dh) {
  if (!(L >= 0.0 && L <= 2.0))
    throw std::domain_error("g_transform: L must lie in [0, 2]");
  g_transform_counter.fetch_add(1, std::memory_order_relaxed);
  const double ct = 1.0 - L;
  const double st = std::sqrt(std::max(0.0, 2.0 * L - L * L));
  const double ca = std::cos(dh.alpha), sa = std::sin(dh.alpha);
  Transform t;
  t << ct, -st, 0.0, dh.a,
       st * ca, ct * ca, -sa, dh.d * sa,
       st * sa, ct * sa, ca, dh.d * ca,
       0.0, 0.0, 0.0, 1.0;
  return t;
}

Eigen::Matrix4d g_derivative(double L, const DHRow& dh) {
  // (2L - L^2)^{-1/2} diverges at the endpoints; squashing keeps L in an
  // open interval but saturation can approach them.
  const double l = std::clamp(L, 1e-9, 2.0 - 1e-9);
  const double root = std::sqrt(2.0 * l - l * l);
  const double q = (1.0 - l) / root;
  const double ca = std::cos(dh.alpha), sa = std::sin(dh.alpha);
  Eigen::Matrix4d t;
  t << -1.0, -q, 0.0, 0.0,
       ca * q, -ca, 0.0, 0.0,
       sa * q, -sa, 0.0, 0.0,
       0.0, 0.0, 0.0, 0.0;
  return t;
}

void validate_goal(const GoalSpec& goal) {
  if (!is_rigid_transform(goal.target))
    throw std::invalid_argument("goal: target is not a rigid transform");
  if (!goal.y_scales.empty() && goal.x_scales.empty())
    throw std::invalid_argument("goal: y-axis points require x-axis points (n2 > 0 => n1 > 0)");
  for (double k : goal.x_scales)
    if (k == 0.0 || !std::isfinite(k))
      throw std::invalid_argument("goal: x scales must be finite and nonzero");
  for (double q : goal.y_scales)
    if (q == 0.0 || !std::isfinite(q))
      throw std::invalid_argument("goal: y scales must be finite and nonzero");
}

PointMatrix end_effector_points(const Transform& ee, const GoalSpec& goal) {
  const Vec3 origin = translation(ee);
  const Vec3 x_axis = ee.block<3, 1>(0, 0);
  const Vec3 y_axis = ee.block<3, 1>(0, 1);
  PointMatrix points(goal.point_count(), 3);
  int row = 0;
  points.row(row++) = origin;
  for (double k : goal.x_scales) points.row(row++) = origin + k * x_axis;
  for (double q : goal.y_scales) points.row(row++) = origin + q * y_axis;
  return points;
}

PointMatrix GoalSpec::goal_points() const { return end_effector_points(target, *this); }

RolloutTrace rollout_kinematics(const RobotModel& model, const DecompositionPlan& plan,
                                const SlackVector& slack, const GoalSpec& goal) {
  const int total = plan.size();
  const int m = model.dof();
  if (slack.size() != total)
    throw std::invalid_argument("rollout: slack vector size does not match the plan");

  RolloutTrace trace;
  trace.param = plan.param;
  trace.values.resize(static_cast<size_t>(total));
  trace.dvalue_dslack.resize(static_cast<size_t>(total));
  trace.local.resize(static_cast<size_t>(total));
  trace.world.resize(static_cast<size_t>(total));
  trace.joint_pre.resize(static_cast<size_t>(m));
  trace.joint_slot.resize(static_cast<size_t>(m));
  trace.joint_points.resize(m, 3);

  Transform world = model.base_transform;
  for (int t = 0; t < total; ++t) {
    const size_t ti = static_cast<size_t>(t);
    const int joint = plan.joint_of[ti];
    const size_t ji = static_cast<size_t>(joint);

    const double value = squash(slack[t], plan.lower[ti], plan.upper[ti]);
    trace.values[ti] = value;
    trace.dvalue_dslack[ti] = squash_derivative(slack[t], plan.lower[ti], plan.upper[ti]);
    if (plan.param == DecompositionPlan::Param::distance) {
      // The joint's DH parameters and range shift form a constant factor
      // f(s_i; dh); every sub-angle factor is then a pure z-rotation, so the
      // block product equals f(s_i + sum theta_im; dh).
      if (t == plan.first[ji]) {
        trace.joint_pre[ji] = dh_transform(plan.shift[ji], model.joints[ji].dh);
        trace.local[ti] = trace.joint_pre[ji] * g_transform(value, DHRow{});
      } else {
        trace.local[ti] = g_transform(value, DHRow{});
      }
    } else {
      trace.joint_pre[ji] = Transform::Identity();
      trace.local[ti] = dh_transform(value, model.joints[ji].dh);
    }
    world = world * trace.local[ti];
    trace.world[ti] = world;
    if (t == plan.first[ji] + plan.count[ji] - 1) {
      trace.joint_slot[ji] = t;
      trace.joint_points.row(joint) = translation(world);
    }
  }

  trace.ee = world * model.ee_offset;
  trace.ee_points = end_effector_points(trace.ee, goal);
  return trace;
}

SlackVector angle_to_slack(const Eigen::VectorXd& theta, const DecompositionPlan& plan) {
  const int m = static_cast<int>(plan.first.size());
  if (theta.size() != m)
    throw std::invalid_argument("angle_to_slack: theta size does not match the plan");

  SlackVector slack(plan.size());
  for (int i = 0; i < m; ++i) {
    const size_t ji = static_cast<size_t>(i);
    for (int t = plan.first[ji]; t < plan.first[ji] + plan.count[ji]; ++t) {
      const size_t ti = static_cast<size_t>(t);
      double value;
      if (plan.param == DecompositionPlan::Param::distance) {
        const double sub = (theta[i] - plan.shift[ji]) / plan.count[ji];
        value = 1.0 - std::cos(sub);
      } else {
        value = theta[i];
      }
      const double normalized = (value - plan.lower[ti]) / (plan.upper[ti] - plan.lower[ti]);
      if (!(normalized > 0.0 && normalized < 1.0))
        throw std::domain_error("angle_to_slack: theta[" + std::to_string(i) +
                                "] is on or outside its limits");
      slack[t] = sigmoid_inverse(normalized);
    }
  }
  return slack;
}

std::vector<Transform> forward_frames(const RobotModel& model, const Eigen::VectorXd& theta) {
  if (theta.size() != model.dof())
    throw std::invalid_argument("forward_frames: theta size does not match the model");
  std::vector<Transform> frames(static_cast<size_t>(model.dof()));
  Transform world = model.base_transform;
  for (int i = 0; i < model.dof(); ++i) {
    world = world * dh_transform(theta[i], model.joints[static_cast<size_t>(i)].dh);
    frames[static_cast<size_t>(i)] = world;
  }
  return frames;
}

Transform forward_pose(const RobotModel& model, const Eigen::VectorXd& theta) {
  const auto frames = forward_frames(model, theta);
  return frames.back() * model.ee_offset;
}

}  // namespace pdo_ik
