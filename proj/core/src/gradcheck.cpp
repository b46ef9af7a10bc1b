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
#include "pdo_ik/gradcheck.hpp"

#include <random>

#include "pdo_ik/gradient.hpp"

namespace pdo_ik {

GradCheckResult run_gradient_check(const GradCheckOptions& options) {
  std::mt19937_64 rng(options.seed ^ 0xC0FFEEull);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const auto range = [&](double lo, double hi) { return lo + uniform(rng) * (hi - lo); };

  GradCheckResult result;
  for (int trial = 0; trial < options.trials; ++trial) {
    const RobotModel model =
        options.model ? *options.model
                      : make_random_chain(rng(), 2 + static_cast<int>(rng() % 7));
    const DecompositionPlan plan = plan_decomposition(model);
    const int m = model.dof();

    // Goal from a random in-limit configuration; random attachment counts.
    Eigen::VectorXd theta_goal(m);
    for (int i = 0; i < m; ++i) {
      const JointSpec& j = model.joints[static_cast<size_t>(i)];
      theta_goal[i] = j.theta_min + uniform(rng) * (j.theta_max - j.theta_min);
    }
    GoalSpec goal;
    goal.target = forward_pose(model, theta_goal);
    const int n1 = static_cast<int>(rng() % 3);
    const int n2 = n1 > 0 ? static_cast<int>(rng() % 3) : 0;
    for (int p = 0; p < n1; ++p)
      goal.x_scales.push_back((uniform(rng) < 0.5 ? -1.0 : 1.0) * range(0.3, 1.2));
    for (int p = 0; p < n2; ++p)
      goal.y_scales.push_back((uniform(rng) < 0.5 ? -1.0 : 1.0) * range(0.3, 1.2));

    // Obstacles: a mix of workspace-box points and points near the chain so
    // that some constraints are active.
    ObstacleCloud obstacles;
    const int n = static_cast<int>(rng() % 101);
    std::normal_distribution<double> gauss(0.0, 0.15);
    const auto frames = forward_frames(model, theta_goal);
    for (int j = 0; j < n; ++j) {
      if (uniform(rng) < 0.5) {
        obstacles.points.emplace_back(range(-0.8, 0.8), range(-0.8, 0.8), range(-0.8, 0.8));
      } else {
        const Vec3 anchor = translation(frames[rng() % frames.size()]);
        obstacles.points.emplace_back(anchor.x() + gauss(rng), anchor.y() + gauss(rng),
                                      anchor.z() + gauss(rng));
      }
    }

    std::optional<ComBox> com_box;
    if (model.has_mass_data() && uniform(rng) < 0.5) {
      ComBox box;
      const Vec3 center(range(-0.3, 0.3), range(-0.3, 0.3), range(-0.3, 0.3));
      for (int axis = 0; axis < 3; ++axis) {
        const double half = range(0.02, 0.25);
        box.lower[axis] = center[axis] - half;
        box.upper[axis] = center[axis] + half;
      }
      com_box = box;
    }

    const int n_constraints = constraint_count(m, obstacles.size(), com_box.has_value());
    ALState al;
    al.mu.resize(n_constraints);
    for (int k = 0; k < n_constraints; ++k) al.mu[k] = range(0.0, 2.0);
    al.rho = range(0.5, 50.0);

    // Finite differences are invalid within ~h of an activation kink; draw
    // slack points until every constraint is clearly on one side.
    SlackVector omega(plan.size());
    bool clear = false;
    for (int attempt = 0; attempt < 50 && !clear; ++attempt) {
      for (int t = 0; t < plan.size(); ++t) omega[t] = range(-2.5, 2.5);
      const RolloutResult probe =
          forward_rollout(model, plan, omega, goal, obstacles, al, com_box);
      clear = probe.constraints.size() == 0 ||
              probe.constraints.cwiseAbs().minCoeff() > 1e-4;
    }
    if (!clear) continue;  // pathological draw; skip rather than mis-measure

    const RolloutResult rollout =
        forward_rollout(model, plan, omega, goal, obstacles, al, com_box);
    const Eigen::VectorXd analytic =
        lagrangian_gradient(model, plan, rollout, goal, obstacles, al, com_box);
    const Eigen::VectorXd numeric = finite_difference_gradient(
        [&](const Eigen::VectorXd& v) {
          return forward_rollout(model, plan, v, goal, obstacles, al, com_box).value;
        },
        omega, options.step);

    for (int t = 0; t < plan.size(); ++t) {
      const double scale = std::max({std::abs(numeric[t]), std::abs(analytic[t]), 1e-3});
      result.max_error = std::max(result.max_error, std::abs(analytic[t] - numeric[t]) / scale);
    }
    result.trials += 1;
  }
  return result;
}

}  // namespace pdo_ik
