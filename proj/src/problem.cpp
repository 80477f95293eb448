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

#include "tnroute/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tnroute {

namespace {

constexpr std::pair<Variant, std::string_view> kVariantNames[] = {
    {Variant::kTsp, "TSP"},
    {Variant::kDnsnn, "DNSNN"},
    {Variant::kNmtsp, "NMTSP"},
    {Variant::kBtspMinMax, "BTSP_MINMAX"},
    {Variant::kBtspMaxMin, "BTSP_MAXMIN"},
    {Variant::kPtsp, "PTSP"},
    {Variant::kTspp, "TSPP"},
    {Variant::kLinearOnly, "LINEAR_ONLY"},
};

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

[[noreturn]] void fail(const std::string& what) { throw ModelError(what); }

}  // namespace

std::string_view to_string(Variant v) {
  for (const auto& [variant, name] : kVariantNames) {
    if (variant == v) return name;
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (const auto& [variant, n] : kVariantNames) {
    if (n == name) return variant;
  }
  throw InputError("unknown variant '" + std::string(name) + "'");
}

bool is_permutation_variant(Variant v) {
  return v == Variant::kTsp || v == Variant::kNmtsp ||
         v == Variant::kBtspMinMax || v == Variant::kBtspMaxMin ||
         v == Variant::kTspp;
}

bool is_bottleneck_variant(Variant v) {
  return v == Variant::kBtspMinMax || v == Variant::kBtspMaxMin;
}

// ---------------------------------------------------------------------------
// CostModel

CostModel CostModel::constant(std::size_t n_nodes, std::size_t n_steps,
                              std::vector<double> matrix) {
  if (matrix.size() != n_nodes * n_nodes) {
    fail("step cost matrix must have n_nodes^2 entries");
  }
  CostModel m;
  m.n_nodes_ = n_nodes;
  m.n_steps_ = n_steps;
  m.broadcast_ = true;
  m.step_ = std::move(matrix);
  m.step_forbidden_.assign(m.step_.size(), 0);
  return m;
}

CostModel CostModel::per_step(std::size_t n_nodes, std::size_t n_steps,
                              std::vector<double> costs) {
  if (costs.size() != n_steps * n_nodes * n_nodes) {
    fail("per-step costs must have n_steps * n_nodes^2 entries");
  }
  CostModel m;
  m.n_nodes_ = n_nodes;
  m.n_steps_ = n_steps;
  m.broadcast_ = false;
  m.step_ = std::move(costs);
  m.step_forbidden_.assign(m.step_.size(), 0);
  return m;
}

CostModel CostModel::linear_only(std::size_t n_nodes, std::size_t n_steps,
                                 std::vector<double> linear) {
  CostModel m;
  m.n_nodes_ = n_nodes;
  m.n_steps_ = n_steps;
  m.set_linear(std::move(linear));
  return m;
}

CostModel CostModel::memory_only(std::size_t n_nodes, std::size_t n_steps,
                                 std::size_t depth,
                                 std::vector<double> values) {
  CostModel m;
  m.n_nodes_ = n_nodes;
  m.n_steps_ = n_steps;
  m.set_memory(depth, std::move(values));
  return m;
}

void CostModel::check_node(int node) const {
  if (node < 0 || static_cast<std::size_t>(node) >= n_nodes_) {
    throw InputError("node id " + std::to_string(node) + " out of range");
  }
}

void CostModel::check_step(std::size_t t) const {
  if (t >= n_steps_) {
    throw InputError("step " + std::to_string(t) + " out of range");
  }
}

std::size_t CostModel::step_offset(std::size_t t, int from, int to) const {
  const std::size_t base = broadcast_ ? 0 : t * n_nodes_ * n_nodes_;
  return base + static_cast<std::size_t>(from) * n_nodes_ +
         static_cast<std::size_t>(to);
}

double CostModel::step(std::size_t t, int from, int to) const {
  if (step_.empty()) return 0.0;
  return step_[step_offset(t, from, to)];
}

bool CostModel::step_forbidden(std::size_t t, int from, int to) const {
  if (step_.empty()) return false;
  return step_forbidden_[step_offset(t, from, to)] != 0;
}

void CostModel::forbid_edge(int from, int to) {
  check_node(from);
  check_node(to);
  if (step_.empty()) fail("no step costs to forbid");
  const std::size_t reps = broadcast_ ? 1 : n_steps_;
  for (std::size_t t = 0; t < reps; ++t) {
    step_forbidden_[step_offset(t, from, to)] = 1;
  }
}

void CostModel::forbid_step(std::size_t t, int from, int to) {
  check_step(t);
  check_node(from);
  check_node(to);
  if (step_.empty()) fail("no step costs to forbid");
  if (broadcast_) materialize_steps();
  step_forbidden_[step_offset(t, from, to)] = 1;
}

void CostModel::materialize_steps() {
  if (!broadcast_ || step_.empty()) {
    broadcast_ = false;
    return;
  }
  std::vector<double> costs;
  std::vector<std::uint8_t> mask;
  costs.reserve(n_steps_ * step_.size());
  mask.reserve(n_steps_ * step_.size());
  for (std::size_t t = 0; t < n_steps_; ++t) {
    costs.insert(costs.end(), step_.begin(), step_.end());
    mask.insert(mask.end(), step_forbidden_.begin(), step_forbidden_.end());
  }
  step_ = std::move(costs);
  step_forbidden_ = std::move(mask);
  broadcast_ = false;
}

void CostModel::set_linear(std::vector<double> linear) {
  if (linear.size() != n_steps_ * n_nodes_) {
    fail("linear costs must have n_steps * n_nodes entries");
  }
  linear_ = std::move(linear);
  linear_forbidden_.assign(linear_.size(), 0);
}

double CostModel::linear(std::size_t t, int node) const {
  if (linear_.empty()) return 0.0;
  return linear_[t * n_nodes_ + static_cast<std::size_t>(node)];
}

bool CostModel::linear_forbidden(std::size_t t, int node) const {
  if (linear_forbidden_.empty()) return false;
  return linear_forbidden_[t * n_nodes_ + static_cast<std::size_t>(node)] != 0;
}

void CostModel::forbid_node(std::size_t t, int node) {
  check_step(t);
  check_node(node);
  if (linear_.empty()) linear_.assign(n_steps_ * n_nodes_, 0.0);
  if (linear_forbidden_.empty()) linear_forbidden_.assign(linear_.size(), 0);
  linear_forbidden_[t * n_nodes_ + static_cast<std::size_t>(node)] = 1;
}

bool CostModel::any_linear_forbidden() const {
  return std::any_of(linear_forbidden_.begin(), linear_forbidden_.end(),
                     [](std::uint8_t f) { return f != 0; });
}

void CostModel::pin(std::size_t t, int node) {
  check_step(t);
  check_node(node);
  if (auto existing = pinned_at(t); existing && *existing != node) {
    fail("step " + std::to_string(t) + " pinned to two different nodes");
  }
  pins_.emplace_back(t, node);
}

std::optional<int> CostModel::pinned_at(std::size_t t) const {
  for (const auto& [step, node] : pins_) {
    if (step == t) return node;
  }
  return std::nullopt;
}

void CostModel::set_memory(std::size_t depth, std::vector<double> values) {
  if (depth == 0) fail("memory depth must be at least 1");
  if (values.size() != n_steps_ * ipow(n_nodes_, depth + 1)) {
    fail("memory costs must have n_steps * n_nodes^(K+1) entries");
  }
  memory_depth_ = depth;
  memory_ = std::move(values);
}

double CostModel::memory(std::size_t t, int destination,
                         std::span<const int> history) const {
  std::size_t off = static_cast<std::size_t>(destination);
  for (std::size_t m = 0; m < memory_depth_; ++m) {
    off = off * n_nodes_ + static_cast<std::size_t>(history[m]);
  }
  return memory_[t * ipow(n_nodes_, memory_depth_ + 1) + off];
}

std::vector<double> CostModel::finite_values() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < step_.size(); ++k) {
    if (!step_forbidden_[k]) out.push_back(step_[k]);
  }
  for (std::size_t k = 0; k < linear_.size(); ++k) {
    if (!linear_forbidden_[k]) out.push_back(linear_[k]);
  }
  out.insert(out.end(), memory_.begin(), memory_.end());
  return out;
}

// ---------------------------------------------------------------------------
// TourProblem

VisitBounds TourProblem::bounds_of(int node) const {
  if (is_permutation_variant(variant)) return {1, 1};
  if (!visit_bounds.empty()) {
    return visit_bounds[static_cast<std::size_t>(node)];
  }
  return {0, static_cast<int>(n_steps)};
}

int TourProblem::group_of(int node) const {
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (std::find(groups[g].begin(), groups[g].end(), node) !=
        groups[g].end()) {
      return static_cast<int>(g);
    }
  }
  return -1;
}

void TourProblem::validate() const {
  const auto n = static_cast<int>(n_nodes);
  if (n_nodes == 0) fail("n_nodes must be positive");
  if (n_steps == 0) fail("n_steps must be positive");
  if (costs.n_nodes() != n_nodes || costs.n_steps() != n_steps) {
    fail("cost model shape does not match n_nodes/n_steps");
  }
  auto in_range = [n](int node) { return node >= 0 && node < n; };
  if (fixed_start && !in_range(*fixed_start)) fail("fixed_start out of range");
  if (fixed_end && !in_range(*fixed_end)) fail("fixed_end out of range");
  if (fixed_start && fixed_end && n_steps == 1 && *fixed_start != *fixed_end) {
    fail("single-step route cannot have distinct fixed endpoints");
  }

  const bool perm = is_permutation_variant(variant);
  if (perm && n_steps != n_nodes) {
    fail(std::string(to_string(variant)) + " requires n_steps == n_nodes");
  }
  if (fixed_start && fixed_end && perm && n_nodes > 1 &&
      *fixed_start == *fixed_end) {
    fail("fixed_start and fixed_end coincide in a permutation variant");
  }

  if (!visit_bounds.empty()) {
    if (variant != Variant::kDnsnn && variant != Variant::kLinearOnly) {
      fail("visit bounds only apply to DNSNN and LINEAR_ONLY");
    }
    if (visit_bounds.size() != n_nodes) fail("bounds must list every node");
    for (const auto& b : visit_bounds) {
      if (b.min_visits < 0 || b.min_visits > b.max_visits) {
        fail("visit bounds must satisfy 0 <= min <= max");
      }
    }
  }
  if (variant == Variant::kDnsnn && visit_bounds.empty()) {
    fail("DNSNN requires visit bounds");
  }

  if (!groups.empty() && variant != Variant::kPtsp) {
    fail("groups only apply to PTSP");
  }
  if (variant == Variant::kPtsp) {
    if (groups.empty()) fail("PTSP requires groups");
    std::vector<int> seen(n_nodes, 0);
    for (const auto& g : groups) {
      if (g.empty()) fail("groups must be non-empty");
      for (int node : g) {
        if (!in_range(node)) fail("group member out of range");
        if (seen[static_cast<std::size_t>(node)]++) {
          fail("groups overlap at node " + std::to_string(node));
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      fail("groups must partition the node set");
    }
    if (n_steps != groups.size()) fail("PTSP requires n_steps == #groups");
  }

  if (!precedence.empty() && variant != Variant::kTspp) {
    fail("precedence only applies to TSPP");
  }
  if (variant == Variant::kTspp) {
    // Kahn's algorithm for acyclicity.
    std::vector<std::vector<int>> succ(n_nodes);
    std::vector<int> indeg(n_nodes, 0);
    for (const auto& p : precedence) {
      if (!in_range(p.before) || !in_range(p.after) || p.before == p.after) {
        fail("precedence pairs must name two distinct valid nodes");
      }
      succ[static_cast<std::size_t>(p.before)].push_back(p.after);
      ++indeg[static_cast<std::size_t>(p.after)];
    }
    std::vector<int> queue;
    for (int v = 0; v < n; ++v) {
      if (indeg[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
    }
    std::size_t visited = 0;
    while (!queue.empty()) {
      const int v = queue.back();
      queue.pop_back();
      ++visited;
      for (int w : succ[static_cast<std::size_t>(v)]) {
        if (--indeg[static_cast<std::size_t>(w)] == 0) queue.push_back(w);
      }
    }
    if (visited != n_nodes) fail("precedence relation contains a cycle");
  }

  if (variant == Variant::kNmtsp) {
    if (memory_depth == 0) fail("NMTSP requires memory_depth >= 1");
    if (memory_depth >= n_steps) {
      fail("NMTSP memory_depth must be shorter than the route");
    }
    if (!costs.has_memory() || costs.memory_depth() != memory_depth) {
      fail("NMTSP requires memory costs of matching depth");
    }
    if (returning) fail("NMTSP supports open routes only");
    if (costs.has_linear()) fail("NMTSP does not take linear costs");
  } else if (memory_depth != 0 || costs.has_memory()) {
    fail("memory costs only apply to NMTSP");
  }

  if (variant == Variant::kLinearOnly) {
    if (!costs.has_linear()) fail("LINEAR_ONLY requires linear costs");
    if (returning) fail("LINEAR_ONLY routes cannot be returning");
  } else if (variant != Variant::kNmtsp && !costs.has_step_costs()) {
    fail("step costs are required");
  }

  if (is_bottleneck_variant(variant)) {
    if (costs.has_linear()) fail("bottleneck variants take no linear costs");
    if (!returning && n_steps < 2) fail("bottleneck route needs an edge");
    for (std::size_t t = 0; t < (costs.time_constant() ? 1 : n_steps); ++t) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (costs.step_forbidden(t, i, j)) continue;
          const double c = costs.step(t, i, j);
          if (c < 1.0 || c != std::floor(c)) {
            fail("bottleneck costs must be positive integers");
          }
        }
      }
    }
  }

  for (const double c : costs.finite_values()) {
    if (!std::isfinite(c)) fail("cost entries must be finite");
  }
  for (const auto& [t, node] : costs.pins()) {
    if (fixed_start && t == 0 && node != *fixed_start) {
      fail("pin at step 0 contradicts fixed_start");
    }
    if (fixed_end && t == n_steps - 1 && node != *fixed_end) {
      fail("pin at the last step contradicts fixed_end");
    }
  }
}

TourProblem make_tsp(std::size_t n_nodes, std::vector<double> matrix,
                     bool returning) {
  TourProblem p;
  p.n_nodes = n_nodes;
  p.n_steps = n_nodes;
  p.variant = Variant::kTsp;
  p.returning = returning;
  p.costs = CostModel::constant(n_nodes, n_nodes, std::move(matrix));
  return p;
}

// ---------------------------------------------------------------------------
// absorb_linear

CostModel absorb_linear(const CostModel& model, const TourProblem& problem) {
  if (model.n_nodes() != problem.n_nodes ||
      model.n_steps() != problem.n_steps) {
    fail("cost model shape does not match the problem");
  }
  if (!model.has_linear() && !model.any_linear_forbidden()) return model;
  if (!model.has_step_costs()) fail("no step costs to absorb into");
  const std::size_t n_steps = model.n_steps();
  if (!problem.returning && n_steps < 2) {
    fail("cannot absorb linear costs into a route without edges");
  }

  std::vector<double> steps;
  const auto n = static_cast<int>(model.n_nodes());
  steps.reserve(n_steps * model.n_nodes() * model.n_nodes());
  std::vector<std::pair<std::size_t, std::pair<int, int>>> forbidden;

  for (std::size_t t = 0; t < n_steps; ++t) {
    // The node entered by the edge of step t is visited at step t+1.
    const bool wrap = t + 1 == n_steps;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double c = model.step(t, i, j);
        bool banned = model.step_forbidden(t, i, j);
        if (!wrap) {
          c += model.linear(t + 1, j);
          banned = banned || model.linear_forbidden(t + 1, j);
        } else if (problem.returning) {
          c += model.linear(0, j);
          banned = banned || model.linear_forbidden(0, j);
        }
        if (!problem.returning && t == 0) {
          c += model.linear(0, i);
          banned = banned || model.linear_forbidden(0, i);
        }
        steps.push_back(c);
        if (banned) forbidden.push_back({t, {i, j}});
      }
    }
  }

  CostModel absorbed =
      CostModel::per_step(model.n_nodes(), n_steps, std::move(steps));
  for (const auto& [t, edge] : forbidden) {
    absorbed.forbid_step(t, edge.first, edge.second);
  }
  for (const auto& [t, node] : model.pins()) absorbed.pin(t, node);
  return absorbed;
}

// ---------------------------------------------------------------------------
// Objective and feasibility

namespace {

void check_route_shape(const TourProblem& problem,
                       std::span<const int> route) {
  if (route.size() != problem.n_steps) {
    throw InputError("route has " + std::to_string(route.size()) +
                     " entries, expected " + std::to_string(problem.n_steps));
  }
  for (int node : route) {
    if (node < 0 || static_cast<std::size_t>(node) >= problem.n_nodes) {
      throw InputError("node id " + std::to_string(node) + " out of range");
    }
  }
}

// Calls f(step, from, to) for every traversed edge.
template <typename F>
void for_each_edge(const TourProblem& problem, std::span<const int> route,
                   F f) {
  const std::size_t n = route.size();
  for (std::size_t t = 0; t + 1 < n; ++t) f(t, route[t], route[t + 1]);
  if (problem.returning) f(n - 1, route[n - 1], route[0]);
}

std::vector<int> clamped_history(std::span<const int> route, std::size_t t,
                                 std::size_t depth) {
  std::vector<int> hist(depth);
  for (std::size_t m = 0; m < depth; ++m) {
    hist[m] = route[t >= m ? t - m : 0];
  }
  return hist;
}

}  // namespace

std::optional<double> route_cost(const TourProblem& problem,
                                 std::span<const int> route) {
  check_route_shape(problem, route);
  const CostModel& c = problem.costs;

  if (problem.variant == Variant::kNmtsp) {
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < route.size(); ++t) {
      const auto hist = clamped_history(route, t, c.memory_depth());
      total += c.memory(t, route[t + 1], hist);
    }
    return total;
  }

  for (std::size_t t = 0; t < route.size(); ++t) {
    if (c.linear_forbidden(t, route[t])) return std::nullopt;
  }

  if (is_bottleneck_variant(problem.variant)) {
    const bool maximize_min = problem.variant == Variant::kBtspMaxMin;
    std::optional<double> agg;
    bool banned = false;
    for_each_edge(problem, route, [&](std::size_t t, int i, int j) {
      if (c.step_forbidden(t, i, j)) banned = true;
      const double v = c.step(t, i, j);
      if (!agg) {
        agg = v;
      } else {
        agg = maximize_min ? std::min(*agg, v) : std::max(*agg, v);
      }
    });
    if (banned) return std::nullopt;
    return agg.value_or(0.0);
  }

  double total = 0.0;
  for (std::size_t t = 0; t < route.size(); ++t) {
    total += c.linear(t, route[t]);
  }
  if (problem.variant == Variant::kLinearOnly) return total;

  bool banned = false;
  for_each_edge(problem, route, [&](std::size_t t, int i, int j) {
    if (c.step_forbidden(t, i, j)) banned = true;
    total += c.step(t, i, j);
  });
  if (banned) return std::nullopt;
  return total;
}

bool objective_better(const TourProblem& problem, double a, double b) {
  if (problem.variant == Variant::kBtspMaxMin) return a > b;
  return a < b;
}

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kLength:
      return "length";
    case Violation::Kind::kRepetition:
      return "repetition";
    case Violation::Kind::kBound:
      return "bound";
    case Violation::Kind::kGroup:
      return "group";
    case Violation::Kind::kPrecedence:
      return "precedence";
    case Violation::Kind::kForbidden:
      return "forbidden";
    case Violation::Kind::kPinned:
      return "pinned";
    case Violation::Kind::kEndpoint:
      return "endpoint";
  }
  return "?";
}

FeasibilityReport check_feasible(const TourProblem& problem,
                                 std::span<const int> route) {
  FeasibilityReport report;
  auto add = [&report](Violation::Kind kind, std::vector<int> nodes,
                       std::string detail) {
    report.feasible = false;
    report.violations.push_back({kind, std::move(nodes), std::move(detail)});
  };

  if (route.size() != problem.n_steps) {
    add(Violation::Kind::kLength, {}, "route length differs from n_steps");
    return report;
  }
  for (int node : route) {
    if (node < 0 || static_cast<std::size_t>(node) >= problem.n_nodes) {
      add(Violation::Kind::kLength, {node}, "node id out of range");
      return report;
    }
  }

  const CostModel& c = problem.costs;
  if (problem.fixed_start && route.front() != *problem.fixed_start) {
    add(Violation::Kind::kEndpoint, {route.front()}, "fixed_start not honored");
  }
  if (problem.fixed_end && route.back() != *problem.fixed_end) {
    add(Violation::Kind::kEndpoint, {route.back()}, "fixed_end not honored");
  }
  for (const auto& [t, node] : c.pins()) {
    if (route[t] != node) {
      add(Violation::Kind::kPinned, {node},
          "node not visited at pinned step " + std::to_string(t));
    }
  }

  if (problem.variant != Variant::kNmtsp) {
    for (std::size_t t = 0; t < route.size(); ++t) {
      if (c.linear_forbidden(t, route[t])) {
        add(Violation::Kind::kForbidden, {route[t]},
            "node forbidden at step " + std::to_string(t));
      }
    }
    if (problem.variant != Variant::kLinearOnly) {
      for_each_edge(problem, route, [&](std::size_t t, int i, int j) {
        if (c.step_forbidden(t, i, j)) {
          add(Violation::Kind::kForbidden, {i, j},
              "forbidden edge at step " + std::to_string(t));
        }
      });
    }
  }

  std::vector<int> count(problem.n_nodes, 0);
  for (int node : route) ++count[static_cast<std::size_t>(node)];

  if (is_permutation_variant(problem.variant) ||
      problem.variant == Variant::kPtsp) {
    for (std::size_t v = 0; v < problem.n_nodes; ++v) {
      if (count[v] > 1) {
        add(Violation::Kind::kRepetition, {static_cast<int>(v)},
            "node visited " + std::to_string(count[v]) + " times");
      }
    }
  }

  if (problem.variant == Variant::kPtsp) {
    for (std::size_t g = 0; g < problem.groups.size(); ++g) {
      int hits = 0;
      for (int node : problem.groups[g]) hits += count[static_cast<std::size_t>(node)];
      if (hits != 1) {
        add(Violation::Kind::kGroup, problem.groups[g],
            "group " + std::to_string(g) + " visited " + std::to_string(hits) +
                " times");
      }
    }
  }

  if (problem.variant == Variant::kDnsnn ||
      problem.variant == Variant::kLinearOnly) {
    for (std::size_t v = 0; v < problem.n_nodes; ++v) {
      const VisitBounds b = problem.bounds_of(static_cast<int>(v));
      if (count[v] < b.min_visits || count[v] > b.max_visits) {
        add(Violation::Kind::kBound, {static_cast<int>(v)},
            "node visited " + std::to_string(count[v]) + " times, allowed [" +
                std::to_string(b.min_visits) + ", " +
                std::to_string(b.max_visits) + "]");
      }
    }
  }

  if (problem.variant == Variant::kTspp) {
    auto position = [&route](int node) {
      return std::find(route.begin(), route.end(), node) - route.begin();
    };
    for (const auto& p : problem.precedence) {
      if (position(p.before) >= position(p.after)) {
        add(Violation::Kind::kPrecedence, {p.before, p.after},
            "node " + std::to_string(p.before) + " must precede node " +
                std::to_string(p.after));
      }
    }
  }
  return report;
}

}  // namespace tnroute
