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
#include "pdo_ik/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace pdo_ik {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t scenario_seed(std::uint64_t base, std::uint64_t robot,
                            std::uint64_t obstacles, std::uint64_t index) {
  std::uint64_t h = splitmix64(base ^ 0xA5A5A5A5A5A5A5A5ull);
  h = splitmix64(h ^ robot);
  h = splitmix64(h ^ (obstacles << 20));
  return splitmix64(h ^ index);
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

SolveStatus status_from_string(const std::string& s) {
  if (s == "converged") return SolveStatus::converged;
  if (s == "constraint_stalled") return SolveStatus::constraint_stalled;
  if (s == "time_limit") return SolveStatus::time_limit;
  if (s == "max_iterations") return SolveStatus::max_iterations;
  throw std::invalid_argument("results csv: unknown status '" + s + "'");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

BenchmarkReport run_benchmark(const std::vector<RobotModel>& models,
                              const BenchmarkOptions& options) {
  struct Job {
    int model_index;
    int n_obstacles;
    int scenario_index;
  };
  std::vector<Job> jobs;
  for (int mi = 0; mi < static_cast<int>(models.size()); ++mi)
    for (int count : options.obstacle_counts)
      for (int s = 0; s < options.scenarios_per_cell; ++s)
        jobs.push_back({mi, count, s});

  std::vector<DecompositionPlan> plans;
  plans.reserve(models.size());
  for (const auto& model : models) plans.push_back(plan_decomposition(model));

  const size_t solvers = options.solvers.size();
  std::vector<ScenarioRow> rows(jobs.size() * solvers);

  const auto run_job = [&](size_t job_index) {
    const Job& job = jobs[job_index];
    const RobotModel& model = models[static_cast<size_t>(job.model_index)];
    const std::uint64_t seed =
        scenario_seed(options.seed, static_cast<std::uint64_t>(job.model_index),
                      static_cast<std::uint64_t>(job.n_obstacles),
                      static_cast<std::uint64_t>(job.scenario_index));
    Scenario scenario = generate_scenario(model, job.n_obstacles, seed, options.scenario);
    scenario.id = job.scenario_index;

    for (size_t si = 0; si < solvers; ++si) {
      const std::string& solver = options.solvers[si];
      SolveReport report;
      if (solver == "pdo") {
        report = solve_ik(model, plans[static_cast<size_t>(job.model_index)],
                          scenario.goal, scenario.obstacles, options.solver);
      } else if (solver == "angle") {
        report = solve_ik_angle_baseline(model, scenario.goal, scenario.obstacles,
                                         options.solver);
      } else {
        throw std::invalid_argument("run_benchmark: unknown solver '" + solver + "'");
      }
      const Verdict verdict =
          evaluate_solution(model, scenario, report, options.tolerances);

      ScenarioRow& row = rows[job_index * solvers + si];
      row.robot = model.name;
      row.n_obstacles = job.n_obstacles;
      row.scenario_id = job.scenario_index;
      row.solver = solver;
      row.status = report.status;
      row.n_points = scenario.obstacles.size();
      row.eps_d = verdict.eps_d;
      row.eps_theta = verdict.eps_theta;
      row.max_violation = report.max_violation;
      row.joint_violation = verdict.joint_violation;
      row.collision_free = verdict.collision_free;
      row.success = verdict.success;
      row.wall_time = report.wall_time;
    }
  };

  int workers = options.workers;
  if (workers <= 0)
    workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(jobs.size()));

  if (workers <= 1 || jobs.size() <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1))
          run_job(i);
      });
    for (auto& t : pool) t.join();
  }

  BenchmarkReport report;
  report.rows = std::move(rows);

  // Aggregate per (robot, obstacle count, solver); row order already groups
  // the cells deterministically.
  for (int mi = 0; mi < static_cast<int>(models.size()); ++mi) {
    for (int count : options.obstacle_counts) {
      for (const std::string& solver : options.solvers) {
        CellStats cell;
        cell.robot = models[static_cast<size_t>(mi)].name;
        cell.n_obstacles = count;
        cell.solver = solver;
        std::vector<double> times;
        double points = 0.0;
        for (const ScenarioRow& row : report.rows) {
          if (row.robot != cell.robot || row.n_obstacles != count || row.solver != solver)
            continue;
          cell.scenarios += 1;
          cell.p_success += row.success ? 1.0 : 0.0;
          cell.p_joint += row.joint_violation > options.tolerances.joint_fraction ? 1.0 : 0.0;
          cell.p_collision += row.collision_free ? 0.0 : 1.0;
          const bool pose_ok = row.eps_d < options.tolerances.pos &&
                               row.eps_theta < options.tolerances.rot;
          cell.p_ee += pose_ok ? 0.0 : 1.0;
          points += row.n_points;
          times.push_back(row.wall_time);
        }
        if (cell.scenarios == 0) continue;
        const double n = cell.scenarios;
        cell.p_success /= n;
        cell.p_joint /= n;
        cell.p_collision /= n;
        cell.p_ee /= n;
        cell.mean_points = points / n;
        cell.time_p10 = quantile(times, 0.10);
        cell.time_p50 = quantile(times, 0.50);
        cell.time_p90 = quantile(times, 0.90);
        report.cells.push_back(cell);
      }
    }
  }
  return report;
}

void write_results_csv(const BenchmarkReport& report, std::ostream& out) {
  out << "robot,n_obstacles,scenario_id,solver,status,n_points,eps_d,eps_theta,"
         "max_violation,joint_violation,collision_free,success\n";
  for (const ScenarioRow& row : report.rows) {
    out << row.robot << ',' << row.n_obstacles << ',' << row.scenario_id << ','
        << row.solver << ',' << to_string(row.status) << ',' << row.n_points << ','
        << format_double(row.eps_d) << ',' << format_double(row.eps_theta) << ','
        << format_double(row.max_violation) << ','
        << format_double(row.joint_violation) << ','
        << (row.collision_free ? 1 : 0) << ',' << (row.success ? 1 : 0) << '\n';
  }
}

std::vector<ScenarioRow> read_results_csv(std::istream& in) {
  std::vector<ScenarioRow> rows;
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("results csv: empty input");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 12)
      throw std::invalid_argument("results csv: expected 12 columns, got " +
                                  std::to_string(fields.size()));
    ScenarioRow row;
    row.robot = fields[0];
    row.n_obstacles = std::stoi(fields[1]);
    row.scenario_id = std::stoi(fields[2]);
    row.solver = fields[3];
    row.status = status_from_string(fields[4]);
    row.n_points = std::stoi(fields[5]);
    row.eps_d = std::stod(fields[6]);
    row.eps_theta = std::stod(fields[7]);
    row.max_violation = std::stod(fields[8]);
    row.joint_violation = std::stod(fields[9]);
    row.collision_free = fields[10] == "1";
    row.success = fields[11] == "1";
    rows.push_back(row);
  }
  return rows;
}

void write_summary_json(const BenchmarkReport& report, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["cells"] = nlohmann::ordered_json::array();
  for (const CellStats& cell : report.cells) {
    nlohmann::ordered_json entry;
    entry["robot"] = cell.robot;
    entry["n_obstacles"] = cell.n_obstacles;
    entry["solver"] = cell.solver;
    entry["scenarios"] = cell.scenarios;
    entry["p_success"] = cell.p_success;
    entry["p_joint"] = cell.p_joint;
    entry["p_collision"] = cell.p_collision;
    entry["p_ee"] = cell.p_ee;
    entry["mean_points"] = cell.mean_points;
    entry["runtime_s"] = {{"p10", cell.time_p10}, {"p50", cell.time_p50}, {"p90", cell.time_p90}};
    doc["cells"].push_back(entry);
  }
  out << doc.dump(2) << '\n';
}

std::vector<SweepPoint> tolerance_sweep(const std::vector<ScenarioRow>& rows,
                                        const std::vector<double>& tolerances) {
  struct Key {
    std::string robot;
    int n_obstacles;
    std::string solver;
    bool operator<(const Key& other) const {
      return std::tie(robot, n_obstacles, solver) <
             std::tie(other.robot, other.n_obstacles, other.solver);
    }
  };
  std::map<Key, std::vector<const ScenarioRow*>> groups;
  for (const ScenarioRow& row : rows)
    groups[{row.robot, row.n_obstacles, row.solver}].push_back(&row);

  std::vector<SweepPoint> sweep;
  for (const auto& [key, group] : groups) {
    for (double tolerance : tolerances) {
      SweepPoint point;
      point.robot = key.robot;
      point.n_obstacles = key.n_obstacles;
      point.solver = key.solver;
      point.tolerance = tolerance;
      int successes = 0;
      for (const ScenarioRow* row : group) {
        const bool ok = row->status != SolveStatus::time_limit && row->collision_free &&
                        row->joint_violation <= 0.01 && row->eps_d < tolerance &&
                        row->eps_theta < tolerance;
        successes += ok ? 1 : 0;
      }
      point.success_rate = static_cast<double>(successes) / static_cast<double>(group.size());
      sweep.push_back(point);
    }
  }
  return sweep;
}

void write_sweep_csv(const std::vector<SweepPoint>& sweep, std::ostream& out) {
  out << "robot,n_obstacles,solver,tolerance,success_rate\n";
  for (const SweepPoint& point : sweep) {
    out << point.robot << ',' << point.n_obstacles << ',' << point.solver << ','
        << format_double(point.tolerance) << ',' << format_double(point.success_rate)
        << '\n';
  }
}

}  // namespace pdo_ik
