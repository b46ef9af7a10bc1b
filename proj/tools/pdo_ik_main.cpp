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
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pdo_ik/bench.hpp"
#include "pdo_ik/gradcheck.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitInputError = 2;

std::vector<int> parse_counts(const std::string& spec) {
  // Accepts "1..9" ranges and comma lists like "1,3,5".
  std::vector<int> counts;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const int lo = std::stoi(spec.substr(0, dots));
    const int hi = std::stoi(spec.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("obstacle counts: empty range '" + spec + "'");
    for (int c = lo; c <= hi; ++c) counts.push_back(c);
    return counts;
  }
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) counts.push_back(std::stoi(token));
  if (counts.empty()) throw std::invalid_argument("obstacle counts: none given");
  return counts;
}

std::vector<std::string> split_list(const std::string& spec) {
  std::vector<std::string> items;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) items.push_back(token);
  }
  return items;
}

pdo_ik::GoalSpec goal_from_numbers(const std::vector<double>& values, double axis_scale) {
  pdo_ik::GoalSpec goal;
  if (values.size() == 3) {
    goal.target.block<3, 1>(0, 3) = pdo_ik::Vec3(values[0], values[1], values[2]);
  } else if (values.size() == 6) {
    // Position plus x-axis direction: 5-DOF goal.
    goal.target.block<3, 1>(0, 3) = pdo_ik::Vec3(values[0], values[1], values[2]);
    pdo_ik::Vec3 x(values[3], values[4], values[5]);
    if (x.norm() < 1e-12) throw std::invalid_argument("goal: zero x-axis direction");
    x.normalize();
    const pdo_ik::Vec3 helper = std::abs(x.z()) < 0.9 ? pdo_ik::Vec3::UnitZ() : pdo_ik::Vec3::UnitY();
    const pdo_ik::Vec3 y = helper.cross(x).normalized();
    goal.target.block<3, 1>(0, 0) = x;
    goal.target.block<3, 1>(0, 1) = y;
    goal.target.block<3, 1>(0, 2) = x.cross(y);
    goal.x_scales = {axis_scale};
  } else if (values.size() == 7) {
    // Position plus quaternion (x y z qx qy qz qw): 6-DOF goal.
    const Eigen::Quaterniond q(values[6], values[3], values[4], values[5]);
    if (q.norm() < 1e-12) throw std::invalid_argument("goal: zero quaternion");
    goal.target.block<3, 3>(0, 0) = q.normalized().toRotationMatrix();
    goal.target.block<3, 1>(0, 3) = pdo_ik::Vec3(values[0], values[1], values[2]);
    goal.x_scales = {axis_scale};
    goal.y_scales = {axis_scale};
  } else {
    throw std::invalid_argument(
        "goal: expected 3 numbers (position), 6 (position + x-axis) or 7 "
        "(position + quaternion)");
  }
  pdo_ik::validate_goal(goal);
  return goal;
}

int run_solve(const std::string& robot_path, const std::vector<double>& goal_numbers,
              const std::string& obstacle_path, const std::string& solver_name,
              double tol_pos, double tol_rot, double time_limit, double axis_scale,
              const std::vector<double>& com_values, bool json_output,
              std::optional<std::uint64_t> seed) {
  const pdo_ik::RobotModel model = pdo_ik::load_robot_file(robot_path);
  const pdo_ik::GoalSpec goal = goal_from_numbers(goal_numbers, axis_scale);
  pdo_ik::ObstacleCloud obstacles;
  if (!obstacle_path.empty()) obstacles = pdo_ik::load_obstacles_file(obstacle_path);

  pdo_ik::SolverOptions options;
  options.time_limit = time_limit;
  if (!com_values.empty()) {
    if (com_values.size() != 6)
      throw std::invalid_argument("--com-box expects 6 numbers: lx ly lz ux uy uz");
    pdo_ik::ComBox box;
    box.lower = pdo_ik::Vec3(com_values[0], com_values[1], com_values[2]);
    box.upper = pdo_ik::Vec3(com_values[3], com_values[4], com_values[5]);
    options.com_box = box;
  }

  pdo_ik::SolveReport report;
  if (solver_name == "pdo") {
    const pdo_ik::DecompositionPlan plan = pdo_ik::plan_decomposition(model);
    std::optional<pdo_ik::SlackVector> omega0;
    if (seed) {
      std::mt19937_64 rng(*seed);
      std::uniform_real_distribution<double> uniform(-1.0, 1.0);
      pdo_ik::SlackVector start(plan.size());
      for (int t = 0; t < plan.size(); ++t) start[t] = uniform(rng);
      omega0 = start;
    }
    report = pdo_ik::solve_ik(model, plan, goal, obstacles, options, omega0);
  } else if (solver_name == "angle") {
    report = pdo_ik::solve_ik_angle_baseline(model, goal, obstacles, options);
  } else {
    throw std::invalid_argument("--solver must be 'pdo' or 'angle'");
  }

  const bool solved = report.status == pdo_ik::SolveStatus::converged &&
                      report.eps_d < tol_pos && report.eps_theta < tol_rot;
  if (json_output) {
    nlohmann::ordered_json doc;
    doc["status"] = std::string(pdo_ik::to_string(report.status));
    doc["solved"] = solved;
    doc["theta"] = std::vector<double>(report.theta.data(),
                                       report.theta.data() + report.theta.size());
    doc["eps_d"] = report.eps_d;
    doc["eps_theta"] = report.eps_theta;
    doc["max_violation"] = report.max_violation;
    doc["outer_iters"] = report.outer_iters;
    doc["inner_iters"] = report.inner_iters;
    doc["wall_time_s"] = report.wall_time;
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << "status:        " << pdo_ik::to_string(report.status) << '\n';
    std::cout << "theta:        ";
    for (int i = 0; i < report.theta.size(); ++i) std::cout << ' ' << report.theta[i];
    std::cout << '\n';
    std::cout << "eps_d:         " << report.eps_d << " m\n";
    std::cout << "eps_theta:     " << report.eps_theta << " rad\n";
    std::cout << "max_violation: " << report.max_violation << " m\n";
    std::cout << "iterations:    " << report.outer_iters << " outer / "
              << report.inner_iters << " inner\n";
    std::cout << "wall_time:     " << report.wall_time << " s\n";
  }
  return solved ? kExitSuccess : kExitSolverFailure;
}

int run_bench(const std::vector<std::string>& robot_paths, const std::string& counts_spec,
              int scenarios, const std::string& solvers_spec, const std::string& out_dir,
              int workers, std::uint64_t seed, double time_limit) {
  std::vector<pdo_ik::RobotModel> models;
  for (const auto& path : robot_paths) models.push_back(pdo_ik::load_robot_file(path));

  pdo_ik::BenchmarkOptions options;
  options.obstacle_counts = parse_counts(counts_spec);
  options.scenarios_per_cell = scenarios;
  options.solvers = split_list(solvers_spec);
  options.seed = seed;
  options.workers = workers;
  options.solver.time_limit = time_limit;
  options.tolerances.time_limit = time_limit;

  const pdo_ik::BenchmarkReport report = pdo_ik::run_benchmark(models, options);

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream csv(out_dir + "/results.csv");
    if (!csv) throw std::invalid_argument("cannot write to '" + out_dir + "/results.csv'");
    pdo_ik::write_results_csv(report, csv);
  }
  {
    std::ofstream json(out_dir + "/summary.json");
    if (!json) throw std::invalid_argument("cannot write to '" + out_dir + "/summary.json'");
    pdo_ik::write_summary_json(report, json);
  }

  std::cout << "robot,n_obstacles,solver,P_scs,P_joint,P_col,P_ee,median_time_s\n";
  for (const auto& cell : report.cells) {
    std::cout << cell.robot << ',' << cell.n_obstacles << ',' << cell.solver << ','
              << cell.p_success << ',' << cell.p_joint << ',' << cell.p_collision << ','
              << cell.p_ee << ',' << cell.time_p50 << '\n';
  }
  std::cout << "wrote " << out_dir << "/results.csv and summary.json\n";
  return kExitSuccess;
}

int run_sweep(const std::string& in_dir, const std::string& tolerances_spec) {
  std::ifstream csv(in_dir + "/results.csv");
  if (!csv) throw std::invalid_argument("cannot open '" + in_dir + "/results.csv'");
  const auto rows = pdo_ik::read_results_csv(csv);

  std::vector<double> tolerances;
  for (const auto& token : split_list(tolerances_spec)) tolerances.push_back(std::stod(token));
  if (tolerances.empty()) throw std::invalid_argument("--tolerances: none given");

  const auto sweep = pdo_ik::tolerance_sweep(rows, tolerances);
  {
    std::ofstream out(in_dir + "/sweep.csv");
    if (!out) throw std::invalid_argument("cannot write to '" + in_dir + "/sweep.csv'");
    pdo_ik::write_sweep_csv(sweep, out);
  }
  pdo_ik::write_sweep_csv(sweep, std::cout);
  return kExitSuccess;
}

int run_check_grad(const std::string& robot_path, int trials, std::uint64_t seed) {
  pdo_ik::GradCheckOptions options;
  options.trials = trials;
  options.seed = seed;
  if (!robot_path.empty()) options.model = pdo_ik::load_robot_file(robot_path);
  const pdo_ik::GradCheckResult result = pdo_ik::run_gradient_check(options);
  std::cout << "trials:             " << result.trials << '\n';
  std::cout << "max relative error: " << result.max_error << '\n';
  return result.max_error < 1e-5 ? kExitSuccess : kExitSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance-reparameterized constrained inverse kinematics"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one IK problem");
  std::string robot_path, obstacle_path, solver_name = "pdo";
  std::vector<double> goal_numbers, com_values;
  double tol_pos = 0.01, tol_rot = 0.01, time_limit = 60.0, axis_scale = 1.0;
  bool json_output = false;
  std::optional<std::uint64_t> solve_seed;
  solve->add_option("--robot", robot_path, "Robot description JSON")->required();
  solve->add_option("--goal", goal_numbers,
                    "3 numbers (x y z), 6 (x y z + x-axis direction) or 7 "
                    "(x y z qx qy qz qw)")
      ->required()
      ->expected(3, 7);
  solve->add_option("--obstacles", obstacle_path, "Point cloud file (x y z per line)");
  solve->add_option("--solver", solver_name, "pdo | angle")->capture_default_str();
  solve->add_option("--tol-pos", tol_pos, "Position tolerance, m")->capture_default_str();
  solve->add_option("--tol-rot", tol_rot, "Rotation tolerance, rad")->capture_default_str();
  solve->add_option("--time-limit", time_limit, "Seconds")->capture_default_str();
  solve->add_option("--axis-scale", axis_scale, "Attachment point scale, m")
      ->capture_default_str();
  solve->add_option("--com-box", com_values, "CoM box: lx ly lz ux uy uz")->expected(6);
  solve->add_option("--seed", solve_seed, "Randomize the start point");
  solve->add_flag("--json", json_output, "JSON report on stdout");

  // bench
  auto* bench = app.add_subcommand("bench", "Batch benchmark over random scenarios");
  std::vector<std::string> bench_robots;
  std::string counts_spec = "1..9", solvers_spec = "pdo,angle", out_dir;
  int scenarios = 200, workers = 0;
  std::uint64_t bench_seed = 0;
  double bench_time_limit = 60.0;
  bench->add_option("--robot", bench_robots, "Robot description JSON (repeatable)")
      ->required();
  bench->add_option("--obstacles-counts", counts_spec, "Range '1..9' or list '1,3,5'")
      ->capture_default_str();
  bench->add_option("--scenarios", scenarios, "Scenarios per cell")->capture_default_str();
  bench->add_option("--solvers", solvers_spec, "Comma list: pdo,angle")
      ->capture_default_str();
  bench->add_option("--out", out_dir, "Output directory")->required();
  bench->add_option("--workers", workers, "Worker threads (0 = hardware)")
      ->capture_default_str();
  bench->add_option("--seed", bench_seed, "Base seed")->capture_default_str();
  bench->add_option("--time-limit", bench_time_limit, "Per-solve limit, s")
      ->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Re-score stored solutions at tolerances");
  std::string in_dir, tolerances_spec = "1e-1,1e-2,1e-3,1e-4";
  sweep->add_option("--in", in_dir, "Bench output directory")->required();
  sweep->add_option("--tolerances", tolerances_spec, "Comma list")->capture_default_str();

  // check-grad
  auto* check = app.add_subcommand("check-grad", "Finite-difference gradient suite");
  std::string check_robot;
  int trials = 100;
  std::uint64_t check_seed = 0;
  check->add_option("--robot", check_robot, "Robot JSON (default: random chains)");
  check->add_option("--trials", trials, "Number of random problems")->capture_default_str();
  check->add_option("--seed", check_seed, "Base seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitInputError;
  }

  try {
    if (*solve)
      return run_solve(robot_path, goal_numbers, obstacle_path, solver_name, tol_pos,
                       tol_rot, time_limit, axis_scale, com_values, json_output,
                       solve_seed);
    if (*bench)
      return run_bench(bench_robots, counts_spec, scenarios, solvers_spec, out_dir,
                       workers, bench_seed, bench_time_limit);
    if (*sweep) return run_sweep(in_dir, tolerances_spec);
    if (*check) return run_check_grad(check_robot, trials, check_seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolverFailure;
  }
  return kExitInputError;
}
