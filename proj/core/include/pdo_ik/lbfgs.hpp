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

#include <chrono>
#include <functional>
#include <optional>

#include <Eigen/Core>

namespace pdo_ik {

struct InnerOptions {
  int history = 10;            // L-BFGS memory
  double grad_tol = 1e-8;      // stop when ||g||_inf <= grad_tol
  int max_iterations = 500;
  int max_line_search = 40;    // function evaluations per line search
  double max_step = 10.0;      // per-iteration cap on ||step||_inf
};

/// Objective callable: returns f(x) and fills grad (same size as x).
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;      // ||g||_inf at x
  int iterations = 0;
  bool converged = false;      // gradient tolerance reached
  bool hit_deadline = false;
};

/// Limited-memory BFGS with a strong-Wolfe line search (c1 = 1e-4, c2 = 0.9).
/// Accepted steps never increase the value. Returns immediately if the
/// initial gradient already meets the tolerance. Throws
/// std::invalid_argument if f or its gradient is non-finite at x0.
LbfgsResult lbfgs_minimize(
    const Objective& f, Eigen::VectorXd x0, const InnerOptions& options = {},
    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

}  // namespace pdo_ik
