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


// Brute-force reference solvers. Enumerates routes directly from the problem
// definition; shares nothing with the tensor code beyond the problem model.

#ifndef TNROUTE_ORACLE_HPP_
#define TNROUTE_ORACLE_HPP_

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tnroute/problem.hpp"

namespace tnroute {

inline constexpr std::size_t kOracleMaxSteps = 10;

// Raised when an instance exceeds the enumeration guard.
class OracleLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Calls `visit` with every feasible route in lexicographic order.
void enumerate_feasible(const TourProblem& problem,
                        const std::function<void(const Route&)>& visit);
std::vector<Route> feasible_routes(const TourProblem& problem);

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<Route> routes;          // every optimal route, lexicographic
  std::size_t feasible_count = 0;
};

// Objectives within 1e-9 * max(1, |best|) of the best are treated as equal.
OracleResult optimal_set(const TourProblem& problem);

}  // namespace tnroute

#endif  // TNROUTE_ORACLE_HPP_
