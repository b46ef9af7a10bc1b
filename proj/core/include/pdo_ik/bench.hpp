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

#include <iosfwd>

#include "pdo_ik/scenario.hpp"

namespace pdo_ik {

struct BenchmarkOptions {
  std::vector<int> obstacle_counts = {1, 3, 5, 7, 9};
  int scenarios_per_cell = 200;
  std::vector<std::string> solvers = {"pdo", "angle"};  // "pdo" | "angle"
  std::uint64_t seed = 0;
  int workers = 0;              // 0 = hardware concurrency
  SolverOptions solver;
  ScenarioParams scenario;
  EvalTolerances tolerances;
};

/// One row per (scenario, solver). All fields except wall_time are
/// deterministic functions of the seed.
struct ScenarioRow {
  std::string robot;
  int n_obstacles = 0;
  int scenario_id = 0;
  std::string solver;
  SolveStatus status = SolveStatus::max_iterations;
  int n_points = 0;
  double eps_d = 0.0;
  double eps_theta = 0.0;
  double max_violation = 0.0;
  double joint_violation = 0.0;
  bool collision_free = false;
  bool success = false;
  double wall_time = 0.0;       // excluded from the CSV; summarized in JSON
};

struct CellStats {
  std::string robot;
  int n_obstacles = 0;
  std::string solver;
  int scenarios = 0;
  double p_success = 0.0;
  double p_joint = 0.0;         // fraction violating the joint-limit criterion
  double p_collision = 0.0;     // fraction in collision per the checker
  double p_ee = 0.0;            // fraction missing the pose tolerance
  double mean_points = 0.0;
  double time_p10 = 0.0, time_p50 = 0.0, time_p90 = 0.0;  // s
};

struct BenchmarkReport {
  std::vector<ScenarioRow> rows;   // sorted (robot, n_obstacles, id, solver)
  std::vector<CellStats> cells;
};

/// Runs every solver on every scenario of every (robot, obstacle-count)
/// cell, optionally across a worker pool. Scenario seeds derive from
/// options.seed; the report content is reproducible bit-exactly.
BenchmarkReport run_benchmark(const std::vector<RobotModel>& models,
                              const BenchmarkOptions& options);

/// Deterministic per-scenario table (no timing columns).
void write_results_csv(const BenchmarkReport& report, std::ostream& out);
std::vector<ScenarioRow> read_results_csv(std::istream& in);

/// Aggregate rates plus runtime quantiles (the only place timing appears).
void write_summary_json(const BenchmarkReport& report, std::ostream& out);

struct SweepPoint {
  std::string robot;
  int n_obstacles = 0;
  std::string solver;
  double tolerance = 0.0;
  double success_rate = 0.0;
};

/// Re-scores stored rows at each tolerance (applied to both eps_d and
/// eps_theta); other criteria unchanged.
std::vector<SweepPoint> tolerance_sweep(const std::vector<ScenarioRow>& rows,
                                        const std::vector<double>& tolerances);
void write_sweep_csv(const std::vector<SweepPoint>& sweep, std::ostream& out);

}  // namespace pdo_ik
