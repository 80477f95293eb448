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

// Layer tensors of the route network and their assembly into a plan.
//
// Every site (one free route step) carries a stack of tensors that are
// diagonal in the physical index: the initialization vector, one evolution
// tensor (S, Z or S(K)) and any number of filter chains. Canonical labels:
//
//   physical in / out : "i" / "j"
//   evolution bonds   : in "k" / out "l"           (S)
//                       in "k","q" / out "l","p"   (Z: node, running cost)
//                       in "k0".. / out "l0"..     (S(K): node history)
//   filter bonds      : in "k" / out "l"
//
// First sites have no in-bonds, last sites no out-bonds, and a lone site
// has neither.

#ifndef TNROUTE_LAYERS_HPP_
#define TNROUTE_LAYERS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tnroute/problem.hpp"
#include "tnroute/tensor.hpp"

namespace tnroute {

// Invalid solver or layer parameters (e.g. a negative damping factor).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SitePosition { kFirst, kInterior, kLast, kOnly };

SitePosition site_position(std::size_t site, std::size_t n_sites);
bool has_in_bond(SitePosition pos);
bool has_out_bond(SitePosition pos);

enum class LayerKind { kPlus, kS, kSK, kZ, kF, kFBounds, kFGroup, kFPrecedence };

std::string_view to_string(LayerKind kind);

// Initialization / tracing vector over all n_nodes values: entry weight[a]
// (default 1) on allowed nodes, 0 elsewhere. Throws NoSurvivingState when
// `allowed` is empty.
Tensor build_plus(std::span<const int> allowed, std::size_t n_nodes,
                  std::span<const Real> weights = {});

// Fixed nodes adjacent to the free stretch of the route. The in-edge runs
// (in_node -> site node) at in_step; the out-edge (site node -> out_node) at
// out_step.
struct EdgeBoundary {
  std::optional<int> in_node;
  std::size_t in_step = 0;
  std::optional<int> out_node;
  std::size_t out_step = 0;
};

// Imaginary-time MPO for additive step costs. The site sits at route step
// `step`; interior entries use the edge (k -> i) of step-1. Forbidden edges
// give 0. With `shift` every exponent is offset by the tensor's minimum so
// the largest entry is 1.
Tensor build_S_layer(const CostModel& cost, Real tau, std::size_t step,
                     SitePosition pos, const EdgeBoundary& boundary,
                     bool shift = false);

// Count filter for one node, a node class, or a node with successors.
struct CountFilter {
  std::vector<bool> member;      // which physical values are counted
  VisitBounds bounds{0, 1};      // accepted final counts, inclusive
  int initial_count = 0;         // count carried in from fixed steps
  std::vector<bool> successors;  // blocked while the count is still 0
};

Tensor build_count_filter(const CountFilter& filter, SitePosition pos);

// Node `a` appears at most once (bond dimension 2).
Tensor build_F_layer(int a, SitePosition pos, std::size_t n_nodes);
// Node `a` appears between min_visits and max_visits times (bond dimension
// max_visits + 1).
Tensor build_F_bounds_layer(int a, VisitBounds bounds, SitePosition pos,
                            std::size_t n_nodes, int initial_count = 0);
// At most one member of `group` appears.
Tensor build_group_filter(std::span<const int> group, SitePosition pos,
                          std::size_t n_nodes, int initial_count = 0);
// F(a) that also rejects any successor of `a` while `a` has not appeared.
Tensor build_precedence_filter(int a, std::span<const int> successors,
                               SitePosition pos, std::size_t n_nodes,
                               int initial_count = 0);

// Bottleneck MPO. The cost bond has dimension max_cost; index v stands for
// cost v + 1. `initial_cost` is the aggregate over already fixed edges.
struct BottleneckParams {
  Real tau = 1;              // negative for the max-min objective
  int max_cost = 1;
  bool maximize_min = false;
  double offset = 0;         // subtracted from the final aggregate
};

Tensor build_Z_layer(const CostModel& cost, const BottleneckParams& params,
                     std::size_t step, SitePosition pos,
                     const EdgeBoundary& boundary,
                     std::optional<int> initial_cost = {});
std::vector<Tensor> build_Z_layers(const CostModel& cost,
                                   const BottleneckParams& params,
                                   std::size_t first_step,
                                   std::size_t n_sites,
                                   const EdgeBoundary& boundary,
                                   std::optional<int> initial_cost = {});

// Memory MPO with K node bonds. `history` lists the fixed nodes before the
// first site, most recent first, already clamped at the route start (empty
// when no node is fixed); it is only read at the first or lone site.
struct MemoryBoundary {
  std::vector<int> history;
  std::optional<int> out_node;
};

Tensor build_SK_layer(const CostModel& cost, Real tau, std::size_t depth,
                      std::size_t step, SitePosition pos,
                      const MemoryBoundary& boundary, bool shift = false);

// Canonical bond label lists for a layer kind at a position.
std::vector<std::string> in_bond_labels(LayerKind kind, SitePosition pos,
                                        std::size_t depth = 1);
std::vector<std::string> out_bond_labels(LayerKind kind, SitePosition pos,
                                         std::size_t depth = 1);

// ---------------------------------------------------------------------------
// Plans

struct LayerSpec {
  LayerKind kind = LayerKind::kPlus;
  std::size_t site = 0;
  std::size_t step = 0;
  std::string chain;         // bond chain id: "e" or "n<node>" / "g<group>"
  int key = -1;              // node (F*) or group index (F_GROUP)
  VisitBounds bounds{0, 1};
  int initial_count = 0;
  std::vector<int> members;  // group members or precedence successors
  std::vector<int> allowed_nodes;
};

struct LayerTensor {
  LayerSpec spec;
  Tensor tensor;
  std::vector<std::string> in_bonds;
  std::vector<std::string> out_bonds;
};

struct SitePlan {
  std::size_t step = 0;
  SitePosition position = SitePosition::kOnly;
  std::vector<int> allowed;
  Tensor plus;
  std::vector<LayerTensor> layers;  // evolution (if any) first, then filters
};

struct ChainInfo {
  std::string id;
  std::vector<std::size_t> bond_dims;
};

// Bond label used in contraction intermediates for bond q of chain `id`.
std::string bond_label(const std::string& id, std::size_t q = 0);

struct NetworkPlan {
  std::size_t n_nodes = 0;
  Real tau = 0;
  std::vector<SitePlan> sites;
  std::vector<ChainInfo> chains;
  std::vector<int> active_constraints;  // keys of the active filter chains

  // Checks that every chain has one tensor per site and that the out-bond
  // dimensions of each site match the in-bond dimensions of the next.
  void validate() const;
};

// Problem data prepared once per solve.
struct PreparedProblem {
  TourProblem problem;
  CostModel edge_costs;         // step costs with linear terms absorbed
  bool linear_in_plus = false;  // linear costs weight the "+" tensors
  int max_cost = 0;             // bottleneck cost range
  int min_cost = 0;
};

PreparedProblem prepare(const TourProblem& problem);

// Decided part of the route.
struct PlanState {
  std::vector<int> prefix;       // nodes of steps 0 .. m-1
  std::optional<int> end_node;   // node of the last step, if fixed
};

// One constraint chain of the frame.
struct ChainSpec {
  LayerKind kind = LayerKind::kF;
  int key = -1;
  std::string id;
  CountFilter filter;
  std::vector<int> members;
};

// The free stretch of the route for a given state.
struct PlanFrame {
  std::size_t first_step = 0;
  std::size_t n_sites = 0;
  std::vector<std::vector<int>> allowed;  // per site
  std::vector<ChainSpec> chains;
  EdgeBoundary boundary;
  std::optional<int> initial_cost;        // bottleneck aggregate so far
  std::vector<int> history;               // memory history, clamped
};

// Throws NoSurvivingState (infeasible) when the state cannot be completed
// for structural reasons (empty domain, broken precedence).
PlanFrame make_frame(const PreparedProblem& prepared, const PlanState& state);

struct PlanOptions {
  bool shift = false;
  // Keys of the filter chains to include; all when unset.
  std::optional<std::vector<int>> active_keys;
};

// Damping factor actually applied by the layers for the problem's variant
// (negated for the max-min bottleneck).
Real signed_tau(const TourProblem& problem, Real tau);

SitePlan build_site(const PreparedProblem& prepared, const PlanFrame& frame,
                    std::size_t site, Real tau, const PlanOptions& options);
NetworkPlan build_plan(const PreparedProblem& prepared, const PlanFrame& frame,
                       Real tau, const PlanOptions& options = {});
NetworkPlan build_plan(const PreparedProblem& prepared, const PlanState& state,
                       Real tau, const PlanOptions& options = {});

}  // namespace tnroute

#endif  // TNROUTE_LAYERS_HPP_
