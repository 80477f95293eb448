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


// Job reassignment instance generators and an exhaustive reference solver.

#ifndef TNROUTE_TESTS_JRP_ORACLE_HPP_
#define TNROUTE_TESTS_JRP_ORACLE_HPP_

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "support/instances.hpp"
#include "tnroute/jrp.hpp"

namespace tnroute::testing {

inline JrpInstance make_instance(std::size_t j, std::size_t i) {
  JrpInstance inst;
  inst.workers = j;
  inst.vacancies = i;
  inst.current_quality.assign(j, 0.0);
  inst.current_affinity.assign(j, 0.0);
  inst.vacancy_quality.assign(i, 0.0);
  inst.vacancy_affinity.assign(i, std::vector<double>(j, 0.0));
  return inst;
}

inline JrpInstance random_instance(std::mt19937_64& rng, std::size_t j, std::size_t i) {
  JrpInstance inst = make_instance(j, i);
  auto draw = [&] { return static_cast<double>(uniform_int(rng, 0, 20)); };
  for (double& v : inst.current_quality) v = draw();
  for (double& v : inst.current_affinity) v = draw();
  for (double& v : inst.vacancy_quality) v = draw();
  for (auto& row : inst.vacancy_affinity) {
    for (double& v : row) v = draw();
  }
  inst.quality_factor = uniform_int(rng, 1, 3);
  inst.affinity_factor = uniform_int(rng, 0, 2);
  return inst;
}

// Minimum total cost over all (I+1)^J assignments without vacancy reuse.
inline double brute_force(const JrpInstance& inst) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> x(inst.workers, 0);
  const int base = static_cast<int>(inst.vacancies) + 1;
  while (true) {
    std::set<int> used;
    bool ok = true;
    double cost = 0;
    for (std::size_t w = 0; w < x.size() && ok; ++w) {
      if (x[w] == 0) continue;
      ok = used.insert(x[w]).second;
      cost += inst.move_cost(w, static_cast<std::size_t>(x[w]));
    }
    if (ok) best = std::min(best, cost);
    std::size_t k = x.size();
    while (k > 0 && ++x[k - 1] == base) x[--k] = 0;
    if (k == 0) break;
  }
  return best;
}

}  // namespace tnroute::testing

#endif  // TNROUTE_TESTS_JRP_ORACLE_HPP_
