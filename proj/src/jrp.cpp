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


#include "tnroute/jrp.hpp"

#include <cmath>

namespace tnroute {

void JrpInstance::validate() const {
  auto fail = [](const std::string& what) { throw ModelError(what); };
  if (current_quality.size() != workers) fail("current_quality must have J entries");
  if (current_affinity.size() != workers) fail("current_affinity must have J entries");
  if (vacancy_quality.size() != vacancies) fail("vacancy_quality must have I entries");
  if (vacancy_affinity.size() != vacancies) fail("vacancy_affinity must have I rows");
  for (const auto& row : vacancy_affinity) {
    if (row.size() != workers) fail("vacancy_affinity rows must have J entries");
    for (double v : row) {
      if (!std::isfinite(v)) fail("vacancy_affinity must be finite");
    }
  }
  for (const auto* vec : {&current_quality, &vacancy_quality, &current_affinity}) {
    for (double v : *vec) {
      if (!std::isfinite(v)) fail("JRP vectors must be finite");
    }
  }
  if (!std::isfinite(quality_factor) || !std::isfinite(affinity_factor)) {
    fail("JRP factors must be finite");
  }
}

double JrpInstance::move_cost(std::size_t w, std::size_t v) const {
  if (v == 0) return 0.0;
  return quality_factor * (current_quality[w] - vacancy_quality[v - 1]) +
         affinity_factor * (current_affinity[w] - vacancy_affinity[v - 1][w]);
}

TourProblem jrp_to_problem(const JrpInstance& inst) {
  inst.validate();
  if (inst.workers == 0) throw ModelError("JRP needs at least one worker");
  const std::size_t n = inst.vacancies + 1;
  TourProblem p;
  p.variant = Variant::kLinearOnly;
  p.n_nodes = n;
  p.n_steps = inst.workers;
  p.returning = false;
  std::vector<double> linear(inst.workers * n, 0.0);
  for (std::size_t w = 0; w < inst.workers; ++w) {
    for (std::size_t v = 1; v < n; ++v) linear[w * n + v] = inst.move_cost(w, v);
  }
  p.costs = CostModel::linear_only(n, inst.workers, std::move(linear));
  p.visit_bounds.assign(n, VisitBounds{0, 1});
  p.visit_bounds[0] = {0, static_cast<int>(inst.workers)};
  return p;
}

JrpInstance swap_orientation(const JrpInstance& inst, std::string* warning) {
  inst.validate();
  if (inst.vacancies <= inst.workers) {
    if (warning) *warning = "swap_orientation: I <= J, instance left unchanged";
    return inst;
  }
  // Chosen so that move_cost(v, w + 1) of the result equals
  // inst.move_cost(w, v + 1).
  JrpInstance out;
  out.workers = inst.vacancies;
  out.vacancies = inst.workers;
  out.quality_factor = inst.quality_factor;
  out.affinity_factor = inst.affinity_factor;
  out.current_quality.resize(out.workers);
  out.current_affinity.assign(out.workers, 0.0);
  for (std::size_t v = 0; v < inst.vacancies; ++v) {
    out.current_quality[v] = -inst.vacancy_quality[v];
  }
  out.vacancy_quality.resize(out.vacancies);
  out.vacancy_affinity.assign(out.vacancies, std::vector<double>(out.workers));
  for (std::size_t w = 0; w < inst.workers; ++w) {
    out.vacancy_quality[w] = -inst.current_quality[w];
    for (std::size_t v = 0; v < inst.vacancies; ++v) {
      out.vacancy_affinity[w][v] =
          inst.vacancy_affinity[v][w] - inst.current_affinity[w];
    }
  }
  return out;
}

JrpAssignment evaluate_assignment(const JrpInstance& inst, std::vector<int> x) {
  if (x.size() != inst.workers) {
    throw InputError("assignment must list one entry per worker");
  }
  JrpAssignment a;
  std::vector<bool> taken(inst.vacancies + 1, false);
  for (std::size_t w = 0; w < x.size(); ++w) {
    const int v = x[w];
    if (v < 0 || static_cast<std::size_t>(v) > inst.vacancies) {
      throw InputError("vacancy index out of range");
    }
    if (v == 0) continue;
    const auto uv = static_cast<std::size_t>(v);
    if (taken[uv]) throw InputError("vacancy assigned twice");
    taken[uv] = true;
    a.delta_quality += inst.current_quality[w] - inst.vacancy_quality[uv - 1];
    a.delta_affinity +=
        inst.current_affinity[w] - inst.vacancy_affinity[uv - 1][w];
    a.cost += inst.move_cost(w, uv);
  }
  a.x = std::move(x);
  return a;
}

JrpAssignment solve_jrp(const JrpInstance& inst, const SolverConfig& config,
                        bool auto_swap) {
  inst.validate();
  if (inst.workers == 0 || inst.vacancies == 0) {
    return evaluate_assignment(inst, std::vector<int>(inst.workers, 0));
  }
  const bool swap = auto_swap && inst.vacancies > inst.workers;
  const Solution sol =
      solve(jrp_to_problem(swap ? swap_orientation(inst) : inst), config);

  std::vector<int> x(inst.workers, 0);
  if (swap) {
    for (std::size_t v = 0; v < sol.route.size(); ++v) {
      if (sol.route[v] > 0) {
        x[static_cast<std::size_t>(sol.route[v] - 1)] = static_cast<int>(v) + 1;
      }
    }
  } else {
    x = sol.route;
  }
  JrpAssignment a = evaluate_assignment(inst, std::move(x));
  a.tie_counts = sol.tie_counts;
  a.degenerate_choices = sol.degenerate_choices;
  a.swapped = swap;
  return a;
}

}  // namespace tnroute
