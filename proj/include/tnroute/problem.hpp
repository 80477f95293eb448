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

// Problem instances for the traveling salesman problem and its variants:
// cost storage, objective evaluation and feasibility classification.
//
// A route is a vector x of node ids where x[t] is the node visited at step t.
// The additive objective is
//
//   C(x) = sum_t C0[t][x_t] + sum_t C[t][x_t][x_{t+1}]
//
// where the edge at the last step (x_{T-1} -> x_0) only exists for returning
// routes. Bottleneck variants replace the sum over edges by a max (or min).

#ifndef TNROUTE_PROBLEM_HPP_
#define TNROUTE_PROBLEM_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tnroute {

using Route = std::vector<int>;

// Malformed or inconsistent problem data.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments to an evaluation routine (e.g. a node id out of range).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Variant {
  kTsp,
  kDnsnn,        // different number of steps than nodes, per-node visit bounds
  kNmtsp,        // non-markovian: step cost depends on the last K nodes
  kBtspMinMax,   // minimize the most expensive traversed edge
  kBtspMaxMin,   // maximize the cheapest traversed edge
  kPtsp,         // visit exactly one node of every group
  kTspp,         // precedence rules between nodes
  kLinearOnly,   // only per-step node costs, no edges
};

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

// True for variants whose feasible routes are permutations of the nodes.
bool is_permutation_variant(Variant v);
bool is_bottleneck_variant(Variant v);

// Cost tensors of an instance. Step costs are either stored once and broadcast
// over all steps, or stored per step. "Infinite" entries are represented by
// explicit boolean masks, never by floating-point infinities.
class CostModel {
 public:
  CostModel() = default;

  // One N x N row-major matrix shared by every step.
  static CostModel constant(std::size_t n_nodes, std::size_t n_steps,
                            std::vector<double> matrix);
  // T x N x N row-major costs.
  static CostModel per_step(std::size_t n_nodes, std::size_t n_steps,
                            std::vector<double> costs);
  // No edge costs at all; only per-step node costs.
  static CostModel linear_only(std::size_t n_nodes, std::size_t n_steps,
                               std::vector<double> linear);
  // Non-markovian costs only; see set_memory for the layout.
  static CostModel memory_only(std::size_t n_nodes, std::size_t n_steps,
                               std::size_t depth, std::vector<double> values);

  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t n_steps() const { return n_steps_; }

  bool has_step_costs() const { return !step_.empty(); }
  bool time_constant() const { return broadcast_; }
  double step(std::size_t t, int from, int to) const;
  bool step_forbidden(std::size_t t, int from, int to) const;

  // Marks (from, to) forbidden at every step, or at step t only.
  void forbid_edge(int from, int to);
  void forbid_step(std::size_t t, int from, int to);

  // C0: T x N row-major. Absent means all zero.
  void set_linear(std::vector<double> linear);
  bool has_linear() const { return !linear_.empty(); }
  double linear(std::size_t t, int node) const;
  bool linear_forbidden(std::size_t t, int node) const;
  void forbid_node(std::size_t t, int node);
  bool any_linear_forbidden() const;

  // Node `node` must be visited at step t (the "-infinity" linear cost).
  void pin(std::size_t t, int node);
  const std::vector<std::pair<std::size_t, int>>& pins() const {
    return pins_;
  }
  std::optional<int> pinned_at(std::size_t t) const;

  // Non-markovian costs: T x N^(K+1) with index order
  // (t, destination, source, source-1, ..., source-K+1).
  void set_memory(std::size_t depth, std::vector<double> values);
  bool has_memory() const { return !memory_.empty(); }
  std::size_t memory_depth() const { return memory_depth_; }
  double memory(std::size_t t, int destination,
                std::span<const int> history) const;

  // Every finite value stored in the active cost tensors.
  std::vector<double> finite_values() const;

  // Replaces every step cost by f(cost); masks are kept.
  template <typename F>
  CostModel map_step(F f) const {
    CostModel out = *this;
    for (double& c : out.step_) c = f(c);
    return out;
  }

  // Drops the broadcast representation (used when per-step edits follow).
  void materialize_steps();

 private:
  std::size_t step_offset(std::size_t t, int from, int to) const;
  void check_node(int node) const;
  void check_step(std::size_t t) const;

  std::size_t n_nodes_ = 0;
  std::size_t n_steps_ = 0;
  bool broadcast_ = true;
  std::vector<double> step_;
  std::vector<std::uint8_t> step_forbidden_;
  std::vector<double> linear_;
  std::vector<std::uint8_t> linear_forbidden_;
  std::vector<std::pair<std::size_t, int>> pins_;
  std::size_t memory_depth_ = 0;
  std::vector<double> memory_;
};

struct VisitBounds {
  int min_visits = 0;
  int max_visits = 0;
};

struct Precedence {
  int before = 0;
  int after = 0;
};

struct TourProblem {
  std::size_t n_nodes = 0;
  std::size_t n_steps = 0;
  Variant variant = Variant::kTsp;
  bool returning = true;
  std::optional<int> fixed_start;
  std::optional<int> fixed_end;
  std::vector<VisitBounds> visit_bounds;  // DNSNN / LINEAR_ONLY
  std::vector<std::vector<int>> groups;   // PTSP
  std::vector<Precedence> precedence;     // TSPP
  std::size_t memory_depth = 0;           // NMTSP
  CostModel costs;

  // Throws ModelError describing the first broken invariant.
  void validate() const;

  // Bounds for node a; unconstrained nodes get [0, n_steps].
  VisitBounds bounds_of(int node) const;
  // Group index of node, or -1.
  int group_of(int node) const;
};

// Builds a plain TSP instance (n_steps = n_nodes) from an N x N matrix.
TourProblem make_tsp(std::size_t n_nodes, std::vector<double> matrix,
                     bool returning = true);

// Returns an equivalent model whose linear costs are all zero, with each
// C0[t][j] folded into the edges entering node j at step t (the edge leaving
// step t-1). For open routes C0[0][i] goes into the edges leaving step 0.
CostModel absorb_linear(const CostModel& model, const TourProblem& problem);

// Objective of `route` under the problem's variant, or nullopt when the route
// traverses a forbidden entry. Throws InputError on malformed routes.
std::optional<double> route_cost(const TourProblem& problem,
                                 std::span<const int> route);

// True when objective a is strictly better than b for the problem's variant.
bool objective_better(const TourProblem& problem, double a, double b);

struct Violation {
  enum class Kind {
    kLength,
    kRepetition,
    kBound,
    kGroup,
    kPrecedence,
    kForbidden,
    kPinned,
    kEndpoint,
  };
  Kind kind;
  std::vector<int> nodes;
  std::string detail;
};

std::string_view to_string(Violation::Kind kind);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

FeasibilityReport check_feasible(const TourProblem& problem,
                                 std::span<const int> route);

struct IterationStats {
  std::uint64_t multiply_adds = 0;
  std::size_t peak_w_elements = 0;
  double seconds = 0.0;
  std::size_t tie_count = 1;
  std::size_t active_layers = 0;
};

struct Solution {
  Route route;
  std::optional<double> cost;  // nullopt: the route hits a forbidden entry
  bool feasible = false;
  std::vector<Violation> violations;
  std::size_t degenerate_choices = 0;
  std::vector<std::size_t> tie_counts;
  double tau_used = 0.0;
  std::vector<double> tau_trace;
  bool tau_unconverged = false;
  std::vector<IterationStats> iterations;
  std::uint64_t multiply_adds = 0;
  std::size_t peak_w_elements = 0;
  // Approximate mode only.
  std::vector<std::vector<int>> active_layers;
  double truncation_error = 0.0;
};

}  // namespace tnroute

#endif  // TNROUTE_PROBLEM_HPP_
