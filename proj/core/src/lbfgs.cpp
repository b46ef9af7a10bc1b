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
#include "pdo_ik/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace pdo_ik {

namespace {

constexpr double kArmijo = 1e-4;    // c1
constexpr double kCurvature = 0.9;  // c2
constexpr double kStepMax = 1e8;

struct LinePoint {
  double alpha = 0.0;
  double value = 0.0;
  double slope = 0.0;  // gradient dot direction
};

struct LineSearchState {
  const Objective& f;
  const Eigen::VectorXd& x0;
  const Eigen::VectorXd& direction;
  double value0;
  double slope0;
  Eigen::VectorXd x;  // x0 + alpha * direction at the last evaluation
  Eigen::VectorXd grad;
  int evals = 0;

  LinePoint evaluate(double alpha) {
    x = x0 + alpha * direction;
    double value = f(x, grad);
    ++evals;
    if (!std::isfinite(value) || !grad.allFinite())
      value = std::numeric_limits<double>::infinity();
    return {alpha, value, std::isfinite(value) ? grad.dot(direction)
                                               : std::numeric_limits<double>::infinity()};
  }

  bool armijo(const LinePoint& p) const {
    return p.value <= value0 + kArmijo * p.alpha * slope0;
  }
  bool curvature(const LinePoint& p) const {
    return std::abs(p.slope) <= -kCurvature * slope0;
  }
};

// Strong-Wolfe search (bracket then zoom, bisection refinement). Returns
// true and leaves state.x/state.grad at the accepted point; on failure the
// best strictly-decreasing point found is accepted if one exists.
bool wolfe_line_search(LineSearchState& state, double alpha_init, double alpha_max,
                       int max_evals, LinePoint& accepted) {
  LinePoint best{0.0, state.value0, state.slope0};
  bool have_best = false;
  Eigen::VectorXd best_x, best_grad;

  const auto remember = [&](const LinePoint& p) {
    if (std::isfinite(p.value) && p.value < state.value0 &&
        (!have_best || p.value < best.value)) {
      best = p;
      best_x = state.x;
      best_grad = state.grad;
      have_best = true;
    }
  };

  const auto zoom = [&](LinePoint lo, LinePoint hi) -> bool {
    while (state.evals < max_evals) {
      LinePoint mid = state.evaluate(0.5 * (lo.alpha + hi.alpha));
      remember(mid);
      if (!state.armijo(mid) || mid.value >= lo.value) {
        hi = mid;
      } else {
        if (state.curvature(mid)) {
          accepted = mid;
          return true;
        }
        if (mid.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = mid;
      }
      if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, lo.alpha)) break;
    }
    return false;
  };

  LinePoint prev{0.0, state.value0, state.slope0};
  double alpha = std::min(alpha_init, alpha_max);
  bool bracketed = false;
  bool zoomed = false;
  while (state.evals < max_evals) {
    LinePoint p = state.evaluate(alpha);
    remember(p);
    if (!state.armijo(p) || (state.evals > 1 && p.value >= prev.value)) {
      zoomed = zoom(prev, p);
      bracketed = true;
      break;
    }
    if (state.curvature(p)) {
      accepted = p;
      return true;
    }
    if (p.slope >= 0.0) {
      zoomed = zoom(p, prev);
      bracketed = true;
      break;
    }
    if (alpha >= alpha_max) break;  // capped; keep the best decrease found
    prev = p;
    alpha = std::min(alpha * 2.5, alpha_max);
  }
  if (bracketed && zoomed) return true;

  // No Wolfe point within the evaluation budget: fall back to the best
  // decreasing point if any.
  if (have_best) {
    accepted = best;
    state.x = best_x;
    state.grad = best_grad;
    return true;
  }
  return false;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& f, Eigen::VectorXd x0,
                           const InnerOptions& options,
                           std::optional<std::chrono::steady_clock::time_point> deadline) {
  const Eigen::Index n = x0.size();
  Eigen::VectorXd grad(n);
  double value = f(x0, grad);
  if (!std::isfinite(value) || !grad.allFinite())
    throw std::invalid_argument("lbfgs: objective or gradient non-finite at x0");

  LbfgsResult result;
  result.x = x0;
  result.value = value;
  result.grad_norm = grad.lpNorm<Eigen::Infinity>();
  if (result.grad_norm <= options.grad_tol) {
    result.converged = true;
    return result;
  }

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd alpha_buf;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    if (deadline && std::chrono::steady_clock::now() >= *deadline) {
      result.hit_deadline = true;
      break;
    }

    // Two-loop recursion.
    Eigen::VectorXd q = grad;
    const int hist = static_cast<int>(s_hist.size());
    alpha_buf.resize(hist);
    for (int i = hist - 1; i >= 0; --i) {
      const size_t ii = static_cast<size_t>(i);
      alpha_buf[i] = rho_hist[ii] * s_hist[ii].dot(q);
      q -= alpha_buf[i] * y_hist[ii];
    }
    if (hist > 0) {
      const size_t last = static_cast<size_t>(hist - 1);
      const double gamma = s_hist[last].dot(y_hist[last]) / y_hist[last].squaredNorm();
      q *= gamma;
    }
    for (int i = 0; i < hist; ++i) {
      const size_t ii = static_cast<size_t>(i);
      const double beta = rho_hist[ii] * y_hist[ii].dot(q);
      q += (alpha_buf[i] - beta) * s_hist[ii];
    }

    Eigen::VectorXd direction = -q;
    double slope = grad.dot(direction);
    if (slope >= 0.0) {
      // Curvature information went stale; restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      direction = -grad;
      slope = -grad.squaredNorm();
    }

    LineSearchState line{f, x, direction, value, slope, {}, {}, 0};
    const double alpha_init =
        s_hist.empty() ? std::min(1.0, 1.0 / grad.lpNorm<Eigen::Infinity>()) : 1.0;
    // Bound the per-iteration movement: sigmoid squashing saturates a few
    // units out, and steps deep into the flat region freeze coordinates.
    const double dir_norm = direction.lpNorm<Eigen::Infinity>();
    const double alpha_max =
        dir_norm > 0.0 ? std::min(kStepMax, options.max_step / dir_norm) : kStepMax;
    LinePoint accepted;
    if (!wolfe_line_search(line, std::min(alpha_init, alpha_max), alpha_max,
                           options.max_line_search, accepted))
      break;  // no decrease possible along this direction

    Eigen::VectorXd s = line.x - x;
    Eigen::VectorXd y = line.grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    x = line.x;
    value = accepted.value;
    grad = line.grad;
    result.x = x;
    result.value = value;
    result.grad_norm = grad.lpNorm<Eigen::Infinity>();
    result.iterations = iter;
    if (result.grad_norm <= options.grad_tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace pdo_ik
