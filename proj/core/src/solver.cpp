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
#include "pdo_ik/solver.hpp"

#include <cmath>

namespace pdo_ik {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::constraint_stalled: return "constraint_stalled";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

PoseError pose_errors(const Transform& pose, const GoalSpec& goal) {
  PoseError error;
  error.position = (translation(pose) - translation(goal.target)).norm();
  if (!goal.y_scales.empty()) {
    const Eigen::Matrix3d rel =
        pose.block<3, 3>(0, 0).transpose() * goal.target.block<3, 3>(0, 0);
    error.rotation = std::acos(std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0));
  } else if (!goal.x_scales.empty()) {
    // 5-DOF goals constrain only the x-axis direction.
    const Vec3 x_pose = pose.block<3, 1>(0, 0);
    const Vec3 x_goal = goal.target.block<3, 1>(0, 0);
    error.rotation = std::acos(std::clamp(x_pose.dot(x_goal), -1.0, 1.0));
  }
  return error;
}

Eigen::VectorXd recover_angles(const SlackVector& omega, const DecompositionPlan& plan) {
  const int m = static_cast<int>(plan.first.size());
  if (omega.size() != plan.size())
    throw std::invalid_argument("recover_angles: omega size does not match the plan");

  Eigen::VectorXd theta(m);
  for (int i = 0; i < m; ++i) {
    const size_t ji = static_cast<size_t>(i);
    if (plan.param == DecompositionPlan::Param::angle) {
      const int t = plan.first[ji];
      theta[i] = squash(omega[t], plan.lower[static_cast<size_t>(t)],
                        plan.upper[static_cast<size_t>(t)]);
      continue;
    }
    double sum = plan.shift[ji];
    double theta_min = plan.shift[ji];
    double theta_max = plan.shift[ji];
    for (int t = plan.first[ji]; t < plan.first[ji] + plan.count[ji]; ++t) {
      const size_t ti = static_cast<size_t>(t);
      const double value = squash(omega[t], plan.lower[ti], plan.upper[ti]);
      sum += std::acos(std::clamp(1.0 - value, -1.0, 1.0));
      theta_min += std::acos(std::clamp(1.0 - plan.lower[ti], -1.0, 1.0));
      theta_max += std::acos(std::clamp(1.0 - plan.upper[ti], -1.0, 1.0));
    }
    // Squashing keeps each sub-angle in its open interval; the clamp only
    // absorbs the few-ulp dust of the arccos sum.
    theta[i] = std::clamp(sum, theta_min, theta_max);
  }
  return theta;
}

DecompositionPlan angle_parameter_plan(const RobotModel& model) {
  DecompositionPlan plan;
  plan.param = DecompositionPlan::Param::angle;
  for (int i = 0; i < model.dof(); ++i) {
    const JointSpec& j = model.joints[static_cast<size_t>(i)];
    plan.first.push_back(plan.size());
    plan.count.push_back(1);
    plan.shift.push_back(0.0);
    plan.joint_of.push_back(i);
    plan.lower.push_back(j.theta_min);
    plan.upper.push_back(j.theta_max);
  }
  return plan;
}

namespace {

// Canonical slack vector for the joint angles currently encoded by x: equal
// sub-angle split, normalized value clamped away from the interval ends.
// Physically the same configuration, but it undoes slack drift into deep
// sigmoid saturation, where coordinates freeze (the squash derivative
// underflows). Used to re-center warm starts between outer iterations.
Eigen::VectorXd recenter_slack(const Eigen::VectorXd& x, const DecompositionPlan& plan) {
  const Eigen::VectorXd theta = recover_angles(x, plan);
  Eigen::VectorXd fresh(plan.size());
  for (int i = 0; i < static_cast<int>(plan.first.size()); ++i) {
    const size_t ji = static_cast<size_t>(i);
    for (int t = plan.first[ji]; t < plan.first[ji] + plan.count[ji]; ++t) {
      const size_t ti = static_cast<size_t>(t);
      const double value = plan.param == DecompositionPlan::Param::distance
                               ? 1.0 - std::cos((theta[i] - plan.shift[ji]) / plan.count[ji])
                               : theta[i];
      const double normalized = std::clamp(
          (value - plan.lower[ti]) / (plan.upper[ti] - plan.lower[ti]), 1e-9, 1.0 - 1e-9);
      fresh[t] = sigmoid_inverse(normalized);
    }
  }
  return fresh;
}

SolveReport solve_constrained(const RobotModel& model, const DecompositionPlan& plan,
                              const GoalSpec& goal, const ObstacleCloud& obstacles,
                              const SolverOptions& options, Eigen::VectorXd x) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<clock::duration>(
                  std::chrono::duration<double>(options.time_limit));

  validate_goal(goal);
  if (x.size() != plan.size())
    throw std::invalid_argument("solve: start vector size does not match the plan");

  const int n_constraints =
      constraint_count(model.dof(), obstacles.size(), options.com_box.has_value());
  ALState al;
  al.mu = Eigen::VectorXd::Constant(n_constraints, options.mu0);
  al.rho = options.rho0;

  const auto objective = [&](const Eigen::VectorXd& v, Eigen::VectorXd& grad) {
    const RolloutResult rollout =
        forward_rollout(model, plan, v, goal, obstacles, al, options.com_box);
    grad = lagrangian_gradient(model, plan, rollout, goal, obstacles, al,
                               options.com_box);
    return rollout.value;
  };

  SolveReport report;
  SolveStatus status = SolveStatus::max_iterations;
  Eigen::VectorXd best_x = x;
  double best_violation = std::numeric_limits<double>::infinity();
  double best_objective = std::numeric_limits<double>::infinity();

  // Minimizes L_rho for the current multipliers. A slack coordinate that
  // drifts deep into sigmoid saturation freezes (its squash derivative
  // underflows), so after a run that ends saturated we re-center to the
  // canonical slack of the same joint angles (identical L_rho value) and
  // continue; the fresh chart restores usable gradients.
  const auto minimize_inner = [&](Eigen::VectorXd start) {
    LbfgsResult inner = lbfgs_minimize(objective, std::move(start), options.inner, deadline);
    report.inner_iters += inner.iterations;
    for (int restart = 0; restart < 3 && !inner.hit_deadline; ++restart) {
      if (inner.x.lpNorm<Eigen::Infinity>() <= 8.0) break;
      Eigen::VectorXd fresh = recenter_slack(inner.x, plan);
      if ((fresh - inner.x).lpNorm<Eigen::Infinity>() < 1e-9) break;
      LbfgsResult retry = lbfgs_minimize(objective, std::move(fresh), options.inner, deadline);
      report.inner_iters += retry.iterations;
      const bool improved =
          retry.value < inner.value - 1e-10 * (1.0 + std::abs(inner.value));
      inner = std::move(retry);
      if (!improved) break;
    }
    return inner;
  };

  for (int k = 0; k < options.k_max; ++k) {
    if (clock::now() >= deadline) {
      status = SolveStatus::time_limit;
      break;
    }
    const LbfgsResult inner = minimize_inner(x);
    x = inner.x;
    report.outer_iters = k + 1;

    const RolloutResult checked =
        forward_rollout(model, plan, x, goal, obstacles, al, options.com_box);
    const double violation =
        checked.constraints.size() == 0
            ? 0.0
            : std::max(0.0, checked.constraints.maxCoeff());
    if (violation < best_violation ||
        (violation == best_violation && checked.objective < best_objective)) {
      best_violation = violation;
      best_objective = checked.objective;
      best_x = x;
    }

    if (inner.hit_deadline || clock::now() >= deadline) {
      status = SolveStatus::time_limit;
      break;
    }
    if (violation < options.c_tol) {
      status = SolveStatus::converged;
      break;
    }
    if (violation >= options.beta * al.c_last) {
      status = SolveStatus::constraint_stalled;
      break;
    }
    al.c_last = violation;
    al.mu = (al.mu + al.rho * checked.constraints.cwiseMax(0.0)).cwiseMax(0.0);
    al.rho *= options.alpha;
    x = recenter_slack(x, plan);
  }

  if (status != SolveStatus::converged) x = best_x;

  const RolloutResult final_state =
      forward_rollout(model, plan, x, goal, obstacles, al, options.com_box);
  const PoseError pose = pose_errors(final_state.trace.ee, goal);
  report.omega = x;
  report.theta = recover_angles(x, plan);
  report.status = status;
  report.eps_d = pose.position;
  report.eps_theta = pose.rotation;
  report.max_violation = final_state.constraints.size() == 0
                             ? 0.0
                             : std::max(0.0, final_state.constraints.maxCoeff());
  report.wall_time = std::chrono::duration<double>(clock::now() - start).count();
  return report;
}

}  // namespace

SolveReport solve_ik(const RobotModel& model, const DecompositionPlan& plan,
                     const GoalSpec& goal, const ObstacleCloud& obstacles,
                     const SolverOptions& options,
                     const std::optional<SlackVector>& omega0) {
  if (plan.param != DecompositionPlan::Param::distance)
    throw std::invalid_argument("solve_ik: expects a distance-mode plan");
  Eigen::VectorXd x = omega0 ? *omega0 : Eigen::VectorXd::Zero(plan.size());
  return solve_constrained(model, plan, goal, obstacles, options, std::move(x));
}

SolveReport solve_ik_angle_baseline(const RobotModel& model, const GoalSpec& goal,
                                    const ObstacleCloud& obstacles,
                                    const SolverOptions& options,
                                    const std::optional<Eigen::VectorXd>& theta0) {
  const DecompositionPlan plan = angle_parameter_plan(model);
  Eigen::VectorXd x = theta0 ? angle_to_slack(*theta0, plan)
                             : Eigen::VectorXd::Zero(plan.size());
  return solve_constrained(model, plan, goal, obstacles, options, std::move(x));
}

}  // namespace pdo_ik
