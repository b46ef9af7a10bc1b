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
#include "pdo_ik/gradient.hpp"

namespace pdo_ik {

Eigen::Matrix4d objective_seed(const RolloutTrace& trace, const GoalSpec& goal) {
  const PointMatrix goal_points = goal.goal_points();
  if (trace.ee_points.rows() != goal_points.rows())
    throw std::invalid_argument("objective_seed: goal does not match the trace");

  // J sums squared residuals of the origin and of every attached axis point;
  // the origin u_e appears in all of them.
  Vec3 d_origin = trace.ee_points.row(0) - goal_points.row(0);
  Vec3 d_xaxis = Vec3::Zero();
  Vec3 d_yaxis = Vec3::Zero();
  int row = 1;
  for (double k : goal.x_scales) {
    const Vec3 residual = trace.ee_points.row(row) - goal_points.row(row);
    d_xaxis += k * residual;
    d_origin += residual;
    ++row;
  }
  for (double q : goal.y_scales) {
    const Vec3 residual = trace.ee_points.row(row) - goal_points.row(row);
    d_yaxis += q * residual;
    d_origin += residual;
    ++row;
  }

  Eigen::Matrix4d seed = Eigen::Matrix4d::Zero();
  seed.block<3, 1>(0, 0) = d_xaxis;
  seed.block<3, 1>(0, 1) = d_yaxis;
  seed.block<3, 1>(0, 3) = d_origin;
  return seed;
}

void collision_seeds(const RolloutTrace& trace, const Eigen::VectorXd& constraints,
                     const ObstacleCloud& obstacles, const RobotModel& model,
                     const ALState& al, AdjointSet& seeds) {
  const int m = model.dof();
  const int n = obstacles.size();

  // d||u - o||/du is undefined at u == o; the zero vector is a valid
  // subgradient choice there.
  const auto unit_from = [](const Vec3& diff) -> Vec3 {
    const double norm = diff.norm();
    return norm > 0.0 ? Vec3(diff / norm) : Vec3(Vec3::Zero());
  };

  int idx = 0;
  for (int i = 0; i < m; ++i) {
    const Vec3 u = trace.joint_points.row(i);
    for (int j = 0; j < n; ++j, ++idx) {
      const double c = constraints[idx];
      if (c <= 0.0) continue;
      const double weight = al.mu[idx] + al.rho * c;
      // c = r - ||u - o||, so dc/du = -(u - o)/||u - o||.
      seeds.frame[static_cast<size_t>(i)].block<3, 1>(0, 3) -=
          weight * unit_from(u - obstacles.points[static_cast<size_t>(j)]);
    }
  }
  for (int i = 0; i + 1 < m; ++i) {
    const Vec3 u = trace.joint_points.row(i);
    const Vec3 u_next = trace.joint_points.row(i + 1);
    for (int j = 0; j < n; ++j, ++idx) {
      const double c = constraints[idx];
      if (c <= 0.0) continue;
      const double weight = al.mu[idx] + al.rho * c;
      const Vec3& o = obstacles.points[static_cast<size_t>(j)];
      seeds.frame[static_cast<size_t>(i)].block<3, 1>(0, 3) -= weight * unit_from(u - o);
      seeds.frame[static_cast<size_t>(i) + 1].block<3, 1>(0, 3) -=
          weight * unit_from(u_next - o);
    }
  }
}

void com_seeds(const RolloutTrace& trace, const Eigen::VectorXd& constraints,
               const RobotModel& model, const ComBox& box, const ALState& al,
               int block_offset, AdjointSet& seeds) {
  (void)trace;
  (void)box;
  Vec3 d_com = Vec3::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    const int low = block_offset + axis;        // lower - c
    const int high = block_offset + 3 + axis;   // c - upper
    if (constraints[low] > 0.0)
      d_com[axis] -= al.mu[low] + al.rho * constraints[low];
    if (constraints[high] > 0.0)
      d_com[axis] += al.mu[high] + al.rho * constraints[high];
  }
  if (d_com.isZero(0.0)) return;

  double total = 0.0;
  for (const auto& j : model.joints) total += *j.mass;
  for (int i = 0; i < model.dof(); ++i) {
    const JointSpec& j = model.joints[static_cast<size_t>(i)];
    // CoM of link i sits at T_i * com_offset; chain through the constant
    // offset: dL/dT_i = dL/d(T_i X) * X^T.
    Eigen::Matrix4d seed = Eigen::Matrix4d::Zero();
    seed.block<3, 1>(0, 3) = (*j.mass / total) * d_com;
    seeds.frame[static_cast<size_t>(i)] += seed * j.com_offset->transpose();
  }
}

Eigen::VectorXd backward_pass(const RolloutTrace& trace, const AdjointSet& seeds,
                              const RobotModel& model, const DecompositionPlan& plan) {
  const int total = plan.size();
  Eigen::VectorXd grad(total);

  // T_e = W_last * ee_offset, so the end-effector seed maps onto the last
  // frame through the constant offset.
  Eigen::Matrix4d adjoint = seeds.ee * model.ee_offset.transpose();

  for (int i = model.dof() - 1; i >= 0; --i) {
    const size_t ji = static_cast<size_t>(i);
    adjoint += seeds.frame[ji];
    for (int t = plan.first[ji] + plan.count[ji] - 1; t >= plan.first[ji]; --t) {
      const size_t ti = static_cast<size_t>(t);
      const Transform& world_prev =
          (t == 0) ? model.base_transform : trace.world[ti - 1];
      const Eigen::Matrix4d local_adjoint = world_prev.transpose() * adjoint;
      Eigen::Matrix4d dlocal;
      if (plan.param == DecompositionPlan::Param::distance) {
        dlocal = g_derivative(trace.values[ti], DHRow{});
        if (t == plan.first[ji]) dlocal = trace.joint_pre[ji] * dlocal;
      } else {
        dlocal = dh_theta_derivative(trace.values[ti], model.joints[ji].dh);
      }
      grad[t] = local_adjoint.cwiseProduct(dlocal).sum() * trace.dvalue_dslack[ti];
      adjoint = adjoint * trace.local[ti].transpose();
    }
  }
  return grad;
}

Eigen::VectorXd lagrangian_gradient(const RobotModel& model,
                                    const DecompositionPlan& plan,
                                    const RolloutResult& rollout, const GoalSpec& goal,
                                    const ObstacleCloud& obstacles, const ALState& al,
                                    const std::optional<ComBox>& com_box) {
  AdjointSet seeds(model.dof());
  seeds.ee = objective_seed(rollout.trace, goal);
  collision_seeds(rollout.trace, rollout.constraints, obstacles, model, al, seeds);
  if (com_box) {
    const int offset = constraint_count(model.dof(), obstacles.size(), false);
    com_seeds(rollout.trace, rollout.constraints, model, *com_box, al, offset, seeds);
  }
  return backward_pass(rollout.trace, seeds, model, plan);
}

Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_difference_gradient: h must be > 0");
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    probe[k] = x[k] + h;
    const double forward = f(probe);
    probe[k] = x[k] - h;
    const double backward = f(probe);
    probe[k] = x[k];
    grad[k] = (forward - backward) / (2.0 * h);
  }
  return grad;
}

}  // namespace pdo_ik
