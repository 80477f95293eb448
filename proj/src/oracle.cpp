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


#include "tnroute/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tnroute {

namespace {

class Enumerator {
 public:
  Enumerator(const TourProblem& p, const std::function<void(const Route&)>& v)
      : p_(p), visit_(v), count_(p.n_nodes, 0), route_(p.n_steps, 0) {
    if (!p.groups.empty()) {
      group_hits_.assign(p.groups.size(), 0);
    }
  }

  void run() { extend(0); }

 private:
  bool edge_ok(std::size_t t, int from, int to) const {
    if (p_.variant == Variant::kNmtsp || p_.variant == Variant::kLinearOnly) {
      return true;
    }
    return !p_.costs.step_forbidden(t, from, to);
  }

  bool node_ok(std::size_t t, int a) const {
    const auto ua = static_cast<std::size_t>(a);
    if (t == 0 && p_.fixed_start && a != *p_.fixed_start) return false;
    if (t + 1 == p_.n_steps && p_.fixed_end && a != *p_.fixed_end) return false;
    if (const auto pin = p_.costs.pinned_at(t); pin && *pin != a) return false;
    if (p_.variant != Variant::kNmtsp && p_.costs.linear_forbidden(t, a)) {
      return false;
    }
    if (t > 0 && !edge_ok(t - 1, route_[t - 1], a)) return false;

    const bool unique = is_permutation_variant(p_.variant) ||
                        p_.variant == Variant::kPtsp;
    if (unique && count_[ua] > 0) return false;
    if ((p_.variant == Variant::kDnsnn ||
         p_.variant == Variant::kLinearOnly) &&
        count_[ua] + 1 > p_.bounds_of(a).max_visits) {
      return false;
    }
    if (p_.variant == Variant::kPtsp) {
      const int g = p_.group_of(a);
      if (g >= 0 && group_hits_[static_cast<std::size_t>(g)] > 0) return false;
    }
    if (p_.variant == Variant::kTspp) {
      for (const Precedence& rule : p_.precedence) {
        if (rule.after == a && count_[static_cast<std::size_t>(rule.before)] == 0) {
          return false;
        }
      }
    }
    return true;
  }

  void extend(std::size_t t) {
    if (t == p_.n_steps) {
      if (p_.returning && p_.variant != Variant::kLinearOnly &&
          !edge_ok(p_.n_steps - 1, route_.back(), route_.front())) {
        return;
      }
      if (check_feasible(p_, route_).feasible) visit_(route_);
      return;
    }
    for (int a = 0; a < static_cast<int>(p_.n_nodes); ++a) {
      if (!node_ok(t, a)) continue;
      route_[t] = a;
      ++count_[static_cast<std::size_t>(a)];
      const int g = p_.variant == Variant::kPtsp ? p_.group_of(a) : -1;
      if (g >= 0) ++group_hits_[static_cast<std::size_t>(g)];
      extend(t + 1);
      if (g >= 0) --group_hits_[static_cast<std::size_t>(g)];
      --count_[static_cast<std::size_t>(a)];
    }
  }

  const TourProblem& p_;
  const std::function<void(const Route&)>& visit_;
  std::vector<int> count_;
  std::vector<int> group_hits_;
  Route route_;
};

}  // namespace

void enumerate_feasible(const TourProblem& problem,
                        const std::function<void(const Route&)>& visit) {
  problem.validate();
  if (problem.n_steps > kOracleMaxSteps) {
    throw OracleLimitError("oracle refuses instances with more than " +
                           std::to_string(kOracleMaxSteps) + " steps");
  }
  Enumerator(problem, visit).run();
}

std::vector<Route> feasible_routes(const TourProblem& problem) {
  std::vector<Route> out;
  enumerate_feasible(problem, [&out](const Route& r) { out.push_back(r); });
  return out;
}

OracleResult optimal_set(const TourProblem& problem) {
  std::vector<std::pair<double, Route>> scored;
  enumerate_feasible(problem, [&](const Route& r) {
    if (const auto c = route_cost(problem, r)) scored.emplace_back(*c, r);
  });
  OracleResult result;
  result.feasible_count = scored.size();
  if (scored.empty()) return result;
  double best = scored.front().first;
  for (const auto& [c, r] : scored) {
    if (objective_better(problem, c, best)) best = c;
  }
  const double tol = 1e-9 * std::max(1.0, std::fabs(best));
  result.feasible = true;
  result.objective = best;
  for (auto& [c, r] : scored) {
    if (std::fabs(c - best) <= tol) result.routes.push_back(std::move(r));
  }
  return result;
}

}  // namespace tnroute
