// Copyright 2026 The tnroute Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line front end: solve, verify, bench and jrp subcommands.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tnroute/engine.hpp"
#include "tnroute/io.hpp"
#include "tnroute/jrp.hpp"
#include "tnroute/oracle.hpp"

namespace {

using nlohmann::json;
using namespace tnroute;

enum ExitCode : int {
  kOk = 0,
  kSchema = 1,
  kInfeasible = 2,
  kTauUnconverged = 3,
  kVerifyMismatch = 4,
};

constexpr std::size_t kBenchMaxNodes = 14;

struct SolverFlags {
  std::string input = "-";
  std::string tau = "auto";
  std::uint64_t seed = 0;
  std::string approx = "all";
  std::optional<std::size_t> mps_bond;
  std::string reuse = "on";
  std::string format = "json";
  bool timings = false;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f, bool with_input = true) {
  if (with_input) {
    cmd->add_option("--input,-i", f.input, "problem JSON file, - for stdin");
  }
  cmd->add_option("--tau", f.tau, "damping factor or 'auto'");
  cmd->add_option("--seed", f.seed, "tie-breaking seed");
  cmd->add_option("--approx", f.approx,
                  "all | random:k | nearest:k | failures:k");
  cmd->add_option("--mps-bond", f.mps_bond, "bond cap for compression");
  cmd->add_option("--reuse", f.reuse, "reuse cached environments")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--timings", f.timings, "include wall-clock timings");
}

SolverConfig make_config(const SolverFlags& f) {
  SolverConfig config;
  if (f.tau != "auto") {
    try {
      std::size_t used = 0;
      config.tau = std::stod(f.tau, &used);
      if (used != f.tau.size()) throw std::invalid_argument(f.tau);
    } catch (const std::logic_error&) {
      throw ConfigError("--tau expects a number or 'auto'");
    }
  }
  config.seed = f.seed;
  config.reuse = f.reuse == "on";
  config.approx = parse_approx(f.approx);
  config.approx.mps_bond = f.mps_bond;
  config.approx.seed = f.seed;
  return config;
}

void emit(const json& doc, const std::string& format) {
  if (format == "json") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  // Flat key,value listing of the scalar fields.
  std::cout << "field,value\n";
  for (const auto& [key, value] : doc.items()) {
    if (value.is_array() && !value.empty() && value.front().is_number_integer()) {
      std::cout << key << ",";
      for (std::size_t k = 0; k < value.size(); ++k) {
        std::cout << (k ? " " : "") << value[k].dump();
      }
      std::cout << "\n";
    } else if (value.is_primitive()) {
      std::cout << key << "," << value.dump() << "\n";
    }
  }
}

int error_exit(const NoSurvivingState& e) {
  json doc = {{"error", e.what()},
              {"infeasible", e.infeasible()}};
  if (e.iteration()) doc["iteration"] = *e.iteration();
  std::cout << doc.dump(2) << "\n";
  std::cerr << "tnroute: " << e.what() << "\n";
  return e.infeasible() ? kInfeasible : kTauUnconverged;
}

int run_solve(const SolverFlags& f) {
  const TourProblem problem = problem_from_json(read_json_file(f.input));
  const SolverConfig config = make_config(f);
  try {
    const Solution sol = solve(problem, config);
    emit(solution_to_json(problem, sol, {f.timings}), f.format);
    if (!sol.feasible) return kInfeasible;
    if (sol.tau_unconverged) return kTauUnconverged;
    return kOk;
  } catch (const NoSurvivingState& e) {
    return error_exit(e);
  }
}

int run_verify(const SolverFlags& f) {
  const TourProblem problem = problem_from_json(read_json_file(f.input));
  const SolverConfig config = make_config(f);
  const OracleResult oracle = optimal_set(problem);
  json doc;
  doc["oracle_feasible"] = oracle.feasible;
  doc["oracle_feasible_count"] = oracle.feasible_count;
  doc["oracle_optimal_count"] = oracle.routes.size();
  if (oracle.feasible) doc["oracle_objective"] = oracle.objective;
  bool match = false;
  try {
    const Solution sol = solve(problem, config);
    doc["solver"] = solution_to_json(problem, sol, {f.timings});
    const bool in_set = std::find(oracle.routes.begin(), oracle.routes.end(),
                                  sol.route) != oracle.routes.end();
    doc["route_in_optimal_set"] = in_set;
    match = oracle.feasible && sol.feasible && sol.cost &&
            std::fabs(*sol.cost - oracle.objective) <=
                1e-9 * std::max(1.0, std::fabs(oracle.objective));
  } catch (const NoSurvivingState& e) {
    doc["solver_error"] = e.what();
    match = !oracle.feasible && e.infeasible();
  }
  doc["oracle_match"] = match;
  emit(doc, f.format);
  return match ? kOk : kVerifyMismatch;
}

struct BenchFlags {
  std::size_t min_n = 4;
  std::size_t max_n = 10;
  std::string variant = "TSP";
  int max_visits = 2;
  bool open = false;
  std::uint64_t seed = 1;
};

TourProblem bench_problem(const BenchFlags& b, std::size_t n) {
  std::mt19937_64 rng(b.seed * 1000003u + n);
  std::uniform_int_distribution<int> cost(1, 100);
  std::vector<double> m(n * n);
  for (double& v : m) v = cost(rng);
  TourProblem p = make_tsp(n, std::move(m), !b.open);
  p.variant = parse_variant(b.variant);
  if (p.variant == Variant::kDnsnn) {
    p.visit_bounds.assign(n, VisitBounds{0, b.max_visits});
  } else if (p.variant != Variant::kTsp) {
    throw ConfigError("bench supports TSP and DNSNN");
  }
  return p;
}

int run_bench(const BenchFlags& b, const SolverFlags& f) {
  if (b.max_n > kBenchMaxNodes) {
    std::cerr << "tnroute: bench refuses n > " << kBenchMaxNodes << "\n";
    return kSchema;
  }
  if (b.min_n < 2 || b.min_n > b.max_n) {
    std::cerr << "tnroute: bench needs 2 <= --min <= --max\n";
    return kSchema;
  }
  SolverConfig config = make_config(f);
  std::cout << "n,seconds,multiply_adds,peak_w_elements,cost,"
               "later_madds_plain,later_madds_reuse\n";
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t n = b.min_n; n <= b.max_n; ++n) {
    const TourProblem problem = bench_problem(b, n);
    config.reuse = false;
    const auto start = std::chrono::steady_clock::now();
    const Solution plain = solve(problem, config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    config.reuse = true;
    const Solution reused = solve(problem, config);
    std::uint64_t later_plain = 0;
    std::uint64_t later_reuse = 0;
    for (std::size_t k = 1; k < plain.iterations.size(); ++k) {
      later_plain += plain.iterations[k].multiply_adds;
    }
    for (std::size_t k = 1; k < reused.iterations.size(); ++k) {
      later_reuse += reused.iterations[k].multiply_adds;
    }
    std::cout << n << "," << seconds << "," << plain.multiply_adds << ","
              << plain.peak_w_elements << ","
              << (plain.cost ? *plain.cost : std::nan("")) << ","
              << later_plain << "," << later_reuse << "\n";
    xs.push_back(static_cast<double>(n));
    ys.push_back(std::log2(static_cast<double>(plain.peak_w_elements)));
  }
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      mx += xs[k];
      my += ys[k];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxy += (xs[k] - mx) * (ys[k] - my);
      sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    std::cerr << "log2(peak_w_elements) slope per node: " << sxy / sxx << "\n";
  }
  return kOk;
}

struct JrpFlags {
  bool no_swap = false;
};

int run_jrp(const SolverFlags& f, const JrpFlags& j) {
  const JrpInstance inst = jrp_from_json(read_json_file(f.input));
  const SolverConfig config = make_config(f);
  try {
    const JrpAssignment a = solve_jrp(inst, config, !j.no_swap);
    emit(assignment_to_json(a), f.format);
    return kOk;
  } catch (const NoSurvivingState& e) {
    return error_exit(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor-network route optimizer"};
  app.require_subcommand(1);

  SolverFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "solve a routing problem");
  add_solver_flags(solve_cmd, solve_flags);

  SolverFlags verify_flags;
  auto* verify_cmd =
      app.add_subcommand("verify", "compare the solver with brute force");
  add_solver_flags(verify_cmd, verify_flags);

  SolverFlags bench_solver_flags;
  BenchFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "scaling benchmark (CSV)");
  add_solver_flags(bench_cmd, bench_solver_flags, false);
  bench_cmd->add_option("--min", bench_flags.min_n, "smallest node count");
  bench_cmd->add_option("--max", bench_flags.max_n, "largest node count");
  bench_cmd->add_option("--variant", bench_flags.variant, "TSP or DNSNN");
  bench_cmd->add_option("--max-visits", bench_flags.max_visits,
                        "DNSNN visit cap per node");
  bench_cmd->add_flag("--open", bench_flags.open, "open routes");
  bench_cmd->add_option("--instance-seed", bench_flags.seed,
                        "seed for the random cost matrices");

  SolverFlags jrp_flags;
  JrpFlags jrp_extra;
  auto* jrp_cmd = app.add_subcommand("jrp", "solve a job reassignment problem");
  add_solver_flags(jrp_cmd, jrp_flags);
  jrp_cmd->add_flag("--no-swap", jrp_extra.no_swap,
                    "keep the worker-major orientation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kSchema;
  }

  try {
    if (*solve_cmd) return run_solve(solve_flags);
    if (*verify_cmd) return run_verify(verify_flags);
    if (*bench_cmd) return run_bench(bench_flags, bench_solver_flags);
    if (*jrp_cmd) return run_jrp(jrp_flags, jrp_extra);
  } catch (const SchemaError& e) {
    std::cerr << "tnroute: schema error at " << e.what() << "\n";
    return kSchema;
  } catch (const ConfigError& e) {
    std::cerr << "tnroute: " << e.what() << "\n";
    return kSchema;
  } catch (const ModelError& e) {
    std::cerr << "tnroute: " << e.what() << "\n";
    return kSchema;
  } catch (const OracleLimitError& e) {
    std::cerr << "tnroute: " << e.what() << "\n";
    return kSchema;
  } catch (const NoSurvivingState& e) {
    return error_exit(e);
  }
  return kSchema;
}
