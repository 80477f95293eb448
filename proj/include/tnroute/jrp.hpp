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


// Job reassignment: workers either keep their current job (node 0) or move
// to one of the vacancies (nodes 1..I), each vacancy taken at most once.

#ifndef TNROUTE_JRP_HPP_
#define TNROUTE_JRP_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "tnroute/engine.hpp"
#include "tnroute/problem.hpp"

namespace tnroute {

struct JrpInstance {
  std::size_t workers = 0;                   // J
  std::size_t vacancies = 0;                 // I
  std::vector<double> current_quality;       // P^C, length J
  std::vector<double> vacancy_quality;       // P^V, length I
  std::vector<double> current_affinity;      // A^C diagonal, length J
  std::vector<std::vector<double>> vacancy_affinity;  // A^V, I x J
  double quality_factor = 1.0;               // c^P
  double affinity_factor = 1.0;              // c^A

  // Throws ModelError on shape mismatches or non-finite entries.
  void validate() const;
  // Cost of sending worker w to vacancy v (1-based; 0 stays put).
  double move_cost(std::size_t w, std::size_t v) const;
};

struct JrpAssignment {
  std::vector<int> x;          // per worker: 0 stays, v >= 1 takes vacancy v
  double cost = 0.0;
  double delta_quality = 0.0;  // sum over moved workers of P^C - P^V
  double delta_affinity = 0.0; // sum over moved workers of A^C - A^V
  std::vector<std::size_t> tie_counts;
  std::size_t degenerate_choices = 0;
  bool swapped = false;        // solved in the vacancy-major orientation
};

TourProblem jrp_to_problem(const JrpInstance& inst);

// Vacancy-major instance: steps run over vacancies, node w + 1 sends worker
// w to it. Returns `inst` unchanged (and sets *warning) unless I > J.
JrpInstance swap_orientation(const JrpInstance& inst,
                             std::string* warning = nullptr);

// Objective, quality and affinity totals of an assignment x over `inst`.
JrpAssignment evaluate_assignment(const JrpInstance& inst, std::vector<int> x);

// Solves with the engine; swaps orientation first when I > J and
// `auto_swap` is set.
JrpAssignment solve_jrp(const JrpInstance& inst,
                        const SolverConfig& config = {},
                        bool auto_swap = true);

}  // namespace tnroute

#endif  // TNROUTE_JRP_HPP_
