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

#include "tnroute/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace tnroute {

namespace {

using Entries = std::vector<std::pair<std::size_t, Real>>;

std::size_t flat(std::initializer_list<std::size_t> coords,
                 const std::vector<std::size_t>& dims) {
  std::size_t off = 0;
  std::size_t a = 0;
  for (std::size_t c : coords) off = off * dims[a++] + c;
  return off;
}

std::size_t flat(const std::vector<std::size_t>& coords,
                 const std::vector<std::size_t>& dims) {
  std::size_t off = 0;
  for (std::size_t a = 0; a < coords.size(); ++a) off = off * dims[a] + coords[a];
  return off;
}

void check_tau(Real tau) {
  if (std::isnan(tau)) throw ConfigError("tau is not a number");
  if (tau < 0) throw ConfigError("tau must be nonnegative for minimization");
}

// Converts (entry, exponent) pairs into e^{-tau * (exponent - min)} values.
struct ExpEntry {
  std::size_t offset;
  Real exponent;
};

Entries exponentiate(const std::vector<ExpEntry>& raw, Real tau, bool shift) {
  Real base = 0;
  if (shift && !raw.empty()) {
    base = raw.front().exponent;
    for (const auto& e : raw) {
      base = tau >= 0 ? std::min(base, e.exponent) : std::max(base, e.exponent);
    }
  }
  Entries out;
  out.reserve(raw.size());
  for (const auto& e : raw) {
    out.emplace_back(e.offset, std::exp(-tau * (e.exponent - base)));
  }
  return out;
}

std::vector<std::string> phys_labels() { return {"i", "j"}; }

[[noreturn]] void infeasible(const std::string& what) {
  throw NoSurvivingState(what, std::nullopt, true);
}

}  // namespace

SitePosition site_position(std::size_t site, std::size_t n_sites) {
  if (n_sites <= 1) return SitePosition::kOnly;
  if (site == 0) return SitePosition::kFirst;
  if (site + 1 == n_sites) return SitePosition::kLast;
  return SitePosition::kInterior;
}

bool has_in_bond(SitePosition pos) {
  return pos == SitePosition::kInterior || pos == SitePosition::kLast;
}

bool has_out_bond(SitePosition pos) {
  return pos == SitePosition::kFirst || pos == SitePosition::kInterior;
}

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kPlus:
      return "PLUS";
    case LayerKind::kS:
      return "S";
    case LayerKind::kSK:
      return "SK";
    case LayerKind::kZ:
      return "Z";
    case LayerKind::kF:
      return "F";
    case LayerKind::kFBounds:
      return "F_BOUNDS";
    case LayerKind::kFGroup:
      return "F_GROUP";
    case LayerKind::kFPrecedence:
      return "F_PRECEDENCE";
  }
  return "?";
}

std::vector<std::string> in_bond_labels(LayerKind kind, SitePosition pos,
                                        std::size_t depth) {
  if (!has_in_bond(pos) || kind == LayerKind::kPlus) return {};
  if (kind == LayerKind::kZ) return {"k", "q"};
  if (kind == LayerKind::kSK) {
    std::vector<std::string> out;
    for (std::size_t m = 0; m < depth; ++m) out.push_back("k" + std::to_string(m));
    return out;
  }
  return {"k"};
}

std::vector<std::string> out_bond_labels(LayerKind kind, SitePosition pos,
                                         std::size_t depth) {
  if (!has_out_bond(pos) || kind == LayerKind::kPlus) return {};
  if (kind == LayerKind::kZ) return {"l", "p"};
  if (kind == LayerKind::kSK) {
    std::vector<std::string> out;
    for (std::size_t m = 0; m < depth; ++m) out.push_back("l" + std::to_string(m));
    return out;
  }
  return {"l"};
}

std::string bond_label(const std::string& id, std::size_t q) {
  return id + "." + std::to_string(q);
}

// ---------------------------------------------------------------------------
// Builders

Tensor build_plus(std::span<const int> allowed, std::size_t n_nodes,
                  std::span<const Real> weights) {
  if (allowed.empty()) {
    throw NoSurvivingState("no candidates left for a route step", std::nullopt,
                           true);
  }
  if (!weights.empty() && weights.size() != n_nodes) {
    throw ConfigError("plus weights must cover every node");
  }
  Entries entries;
  for (int a : allowed) {
    if (a < 0 || static_cast<std::size_t>(a) >= n_nodes) {
      throw ConfigError("allowed node out of range");
    }
    const auto v = static_cast<std::size_t>(a);
    entries.emplace_back(v, weights.empty() ? Real{1} : weights[v]);
  }
  return Tensor::sparse({"i"}, {n_nodes}, std::move(entries));
}

Tensor build_S_layer(const CostModel& cost, Real tau, std::size_t step,
                     SitePosition pos, const EdgeBoundary& boundary,
                     bool shift) {
  check_tau(tau);
  const std::size_t d = cost.n_nodes();
  const bool in_edge = has_in_bond(pos);
  if (in_edge && step == 0) throw ConfigError("interior site at step 0");

  // Cost of the fixed in-edge and out-edge for node i; nullopt = forbidden.
  auto boundary_in = [&](int i) -> std::optional<double> {
    if (!boundary.in_node) return 0.0;
    if (cost.step_forbidden(boundary.in_step, *boundary.in_node, i)) return {};
    return cost.step(boundary.in_step, *boundary.in_node, i);
  };
  auto boundary_out = [&](int i) -> std::optional<double> {
    if (!boundary.out_node) return 0.0;
    if (cost.step_forbidden(boundary.out_step, i, *boundary.out_node)) {
      return {};
    }
    return cost.step(boundary.out_step, i, *boundary.out_node);
  };

  std::vector<std::string> labels = phys_labels();
  std::vector<std::size_t> dims = {d, d};
  if (in_edge) {
    labels.push_back("k");
    dims.push_back(d);
  }
  if (has_out_bond(pos)) {
    labels.push_back("l");
    dims.push_back(d);
  }

  std::vector<ExpEntry> raw;
  for (std::size_t i = 0; i < d; ++i) {
    const int node = static_cast<int>(i);
    if (!in_edge) {
      const auto c_in = boundary_in(node);
      if (!c_in) continue;
      if (pos == SitePosition::kFirst) {
        raw.push_back({flat({i, i, i}, dims), static_cast<Real>(*c_in)});
      } else {
        const auto c_out = boundary_out(node);
        if (!c_out) continue;
        raw.push_back({flat({i, i}, dims), static_cast<Real>(*c_in + *c_out)});
      }
      continue;
    }
    std::optional<double> c_out = 0.0;
    if (pos == SitePosition::kLast) c_out = boundary_out(node);
    if (!c_out) continue;
    for (std::size_t k = 0; k < d; ++k) {
      const int prev = static_cast<int>(k);
      if (cost.step_forbidden(step - 1, prev, node)) continue;
      const Real c = static_cast<Real>(cost.step(step - 1, prev, node) + *c_out);
      if (pos == SitePosition::kInterior) {
        raw.push_back({flat({i, i, k, i}, dims), c});
      } else {
        raw.push_back({flat({i, i, k}, dims), c});
      }
    }
  }
  return Tensor::sparse(std::move(labels), std::move(dims),
                        exponentiate(raw, tau, shift));
}

Tensor build_count_filter(const CountFilter& filter, SitePosition pos) {
  const std::size_t d = filter.member.size();
  const VisitBounds& b = filter.bounds;
  if (d == 0) throw ConfigError("count filter over zero nodes");
  if (b.max_visits < 1) {
    throw ModelError(
        "a filter with zero allowed visits must be replaced by removing the "
        "node from the initialization tensors");
  }
  if (b.min_visits < 0 || b.min_visits > b.max_visits) {
    throw ModelError("filter bounds must satisfy 0 <= min <= max");
  }
  if (filter.initial_count < 0 || filter.initial_count > b.max_visits) {
    throw ModelError("filter initial count outside its bond range");
  }
  if (!filter.successors.empty() && filter.successors.size() != d) {
    throw ConfigError("successor mask size differs from member mask");
  }
  const auto bond = static_cast<std::size_t>(b.max_visits) + 1;
  auto blocked = [&](std::size_t i, std::size_t count) {
    return count == 0 && !filter.successors.empty() && filter.successors[i] &&
           !filter.member[i];
  };
  auto accepted = [&](std::size_t final_count) {
    return static_cast<int>(final_count) >= b.min_visits &&
           static_cast<int>(final_count) <= b.max_visits;
  };
  const auto c0 = static_cast<std::size_t>(filter.initial_count);

  std::vector<std::string> labels = phys_labels();
  std::vector<std::size_t> dims = {d, d};
  if (has_in_bond(pos)) {
    labels.push_back("k");
    dims.push_back(bond);
  }
  if (has_out_bond(pos)) {
    labels.push_back("l");
    dims.push_back(bond);
  }

  Entries entries;
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t inc = filter.member[i] ? 1 : 0;
    switch (pos) {
      case SitePosition::kFirst:
        if (!blocked(i, c0) && c0 + inc < bond) {
          entries.emplace_back(flat({i, i, c0 + inc}, dims), 1);
        }
        break;
      case SitePosition::kInterior:
        for (std::size_t k = 0; k < bond; ++k) {
          if (blocked(i, k) || k + inc >= bond) continue;
          entries.emplace_back(flat({i, i, k, k + inc}, dims), 1);
        }
        break;
      case SitePosition::kLast:
        for (std::size_t k = 0; k < bond; ++k) {
          if (blocked(i, k) || !accepted(k + inc)) continue;
          entries.emplace_back(flat({i, i, k}, dims), 1);
        }
        break;
      case SitePosition::kOnly:
        if (!blocked(i, c0) && accepted(c0 + inc)) {
          entries.emplace_back(flat({i, i}, dims), 1);
        }
        break;
    }
  }
  return Tensor::sparse(std::move(labels), std::move(dims),
                        std::move(entries));
}

namespace {

std::vector<bool> node_mask(std::span<const int> nodes, std::size_t n_nodes) {
  std::vector<bool> mask(n_nodes, false);
  for (int a : nodes) {
    if (a < 0 || static_cast<std::size_t>(a) >= n_nodes) {
      throw ConfigError("filter node out of range");
    }
    mask[static_cast<std::size_t>(a)] = true;
  }
  return mask;
}

}  // namespace

Tensor build_F_layer(int a, SitePosition pos, std::size_t n_nodes) {
  return build_F_bounds_layer(a, {0, 1}, pos, n_nodes);
}

Tensor build_F_bounds_layer(int a, VisitBounds bounds, SitePosition pos,
                            std::size_t n_nodes, int initial_count) {
  CountFilter f;
  f.member = node_mask(std::span<const int>(&a, 1), n_nodes);
  f.bounds = bounds;
  f.initial_count = initial_count;
  return build_count_filter(f, pos);
}

Tensor build_group_filter(std::span<const int> group, SitePosition pos,
                          std::size_t n_nodes, int initial_count) {
  if (group.empty()) throw ConfigError("empty node group");
  CountFilter f;
  f.member = node_mask(group, n_nodes);
  f.initial_count = initial_count;
  return build_count_filter(f, pos);
}

Tensor build_precedence_filter(int a, std::span<const int> successors,
                               SitePosition pos, std::size_t n_nodes,
                               int initial_count) {
  CountFilter f;
  f.member = node_mask(std::span<const int>(&a, 1), n_nodes);
  f.initial_count = initial_count;
  f.successors = node_mask(successors, n_nodes);
  if (f.successors[static_cast<std::size_t>(a)]) {
    throw ConfigError("a node cannot succeed itself");
  }
  return build_count_filter(f, pos);
}

Tensor build_Z_layer(const CostModel& cost, const BottleneckParams& params,
                     std::size_t step, SitePosition pos,
                     const EdgeBoundary& boundary,
                     std::optional<int> initial_cost) {
  if (std::isnan(params.tau)) throw ConfigError("tau is not a number");
  if (params.maximize_min ? params.tau > 0 : params.tau < 0) {
    throw ConfigError(params.maximize_min
                          ? "the max-min objective needs tau <= 0"
                          : "the min-max objective needs tau >= 0");
  }
  const int big_m = params.max_cost;
  if (big_m < 1) throw ConfigError("bottleneck cost range must be >= 1");
  const std::size_t d = cost.n_nodes();
  const auto m = static_cast<std::size_t>(big_m);

  auto agg = [&](int a, int b) {
    return params.maximize_min ? std::min(a, b) : std::max(a, b);
  };
  auto edge = [&](std::size_t t, int from, int to) -> std::optional<int> {
    if (cost.step_forbidden(t, from, to)) return {};
    const double c = cost.step(t, from, to);
    if (c < 1 || c > big_m || c != std::floor(c)) {
      throw ConfigError("bottleneck costs must be integers in [1, M]");
    }
    return static_cast<int>(c);
  };
  const int neutral = params.maximize_min ? big_m : 1;
  const int start = initial_cost.value_or(neutral);
  if (start < 1 || start > big_m) {
    throw ConfigError("initial bottleneck cost outside [1, M]");
  }
  auto amplitude = [&](int aggregate) {
    return std::exp(-params.tau * (static_cast<Real>(aggregate) -
                                   static_cast<Real>(params.offset)));
  };
  // Aggregate after folding in the fixed in-edge; nullopt when forbidden.
  auto with_in = [&](int i) -> std::optional<int> {
    if (!boundary.in_node) return start;
    const auto c = edge(boundary.in_step, *boundary.in_node, i);
    if (!c) return {};
    return agg(start, *c);
  };
  auto with_out = [&](int i, int a) -> std::optional<int> {
    if (!boundary.out_node) return a;
    const auto c = edge(boundary.out_step, i, *boundary.out_node);
    if (!c) return {};
    return agg(a, *c);
  };

  std::vector<std::string> labels = phys_labels();
  std::vector<std::size_t> dims = {d, d};
  if (has_in_bond(pos)) {
    labels.insert(labels.end(), {"k", "q"});
    dims.insert(dims.end(), {d, m});
  }
  if (has_out_bond(pos)) {
    labels.insert(labels.end(), {"l", "p"});
    dims.insert(dims.end(), {d, m});
  }

  Entries entries;
  for (std::size_t i = 0; i < d; ++i) {
    const int node = static_cast<int>(i);
    if (pos == SitePosition::kFirst || pos == SitePosition::kOnly) {
      const auto a = with_in(node);
      if (!a) continue;
      if (pos == SitePosition::kFirst) {
        entries.emplace_back(
            flat({i, i, i, static_cast<std::size_t>(*a - 1)}, dims), 1);
      } else if (const auto f = with_out(node, *a)) {
        entries.emplace_back(flat({i, i}, dims), amplitude(*f));
      }
      continue;
    }
    for (std::size_t k = 0; k < d; ++k) {
      const auto c = edge(step - 1, static_cast<int>(k), node);
      if (!c) continue;
      for (std::size_t q = 0; q < m; ++q) {
        const int a = agg(static_cast<int>(q) + 1, *c);
        if (pos == SitePosition::kInterior) {
          entries.emplace_back(
              flat({i, i, k, q, i, static_cast<std::size_t>(a - 1)}, dims), 1);
        } else if (const auto f = with_out(node, a)) {
          entries.emplace_back(flat({i, i, k, q}, dims), amplitude(*f));
        }
      }
    }
  }
  return Tensor::sparse(std::move(labels), std::move(dims),
                        std::move(entries));
}

std::vector<Tensor> build_Z_layers(const CostModel& cost,
                                   const BottleneckParams& params,
                                   std::size_t first_step,
                                   std::size_t n_sites,
                                   const EdgeBoundary& boundary,
                                   std::optional<int> initial_cost) {
  std::vector<Tensor> out;
  out.reserve(n_sites);
  for (std::size_t s = 0; s < n_sites; ++s) {
    out.push_back(build_Z_layer(cost, params, first_step + s,
                                site_position(s, n_sites), boundary,
                                initial_cost));
  }
  return out;
}

Tensor build_SK_layer(const CostModel& cost, Real tau, std::size_t depth,
                      std::size_t step, SitePosition pos,
                      const MemoryBoundary& boundary, bool shift) {
  check_tau(tau);
  if (depth < 1) throw ConfigError("memory depth must be >= 1");
  if (depth >= cost.n_steps()) {
    throw ConfigError("memory depth must be shorter than the route");
  }
  if (!cost.has_memory() || cost.memory_depth() != depth) {
    throw ConfigError("memory costs of the requested depth are missing");
  }
  if (!boundary.history.empty() && boundary.history.size() != depth) {
    throw ConfigError("memory history must hold exactly K nodes");
  }
  const std::size_t d = cost.n_nodes();
  const bool first_like =
      pos == SitePosition::kFirst || pos == SitePosition::kOnly;
  if (first_like && !boundary.history.empty() && step == 0) {
    throw ConfigError("history given for the route's first step");
  }

  std::vector<std::string> labels = phys_labels();
  std::vector<std::size_t> dims = {d, d};
  for (const auto& l : in_bond_labels(LayerKind::kSK, pos, depth)) {
    labels.push_back(l);
    dims.push_back(d);
  }
  for (const auto& l : out_bond_labels(LayerKind::kSK, pos, depth)) {
    labels.push_back(l);
    dims.push_back(d);
  }

  // Cost of leaving node i towards the fixed out-node, given the history
  // before i (most recent first).
  auto out_cost = [&](int i, const std::vector<int>& before) -> Real {
    if (!boundary.out_node) return 0;
    std::vector<int> hist(depth);
    hist[0] = i;
    for (std::size_t q = 1; q < depth; ++q) hist[q] = before[q - 1];
    return static_cast<Real>(cost.memory(step, *boundary.out_node, hist));
  };

  std::vector<ExpEntry> raw;
  for (std::size_t i = 0; i < d; ++i) {
    const int node = static_cast<int>(i);
    if (first_like) {
      std::vector<int> before = boundary.history;
      Real c = 0;
      if (before.empty()) {
        before.assign(depth, node);  // clamped at the route start
      } else {
        c = static_cast<Real>(cost.memory(step - 1, node, before));
      }
      std::vector<std::size_t> coords = {i, i};
      if (pos == SitePosition::kFirst) {
        coords.push_back(i);
        for (std::size_t q = 0; q + 1 < depth; ++q) {
          coords.push_back(static_cast<std::size_t>(before[q]));
        }
      } else {
        c += out_cost(node, before);
      }
      raw.push_back({flat(coords, dims), c});
      continue;
    }
    // Enumerate the K incoming history nodes.
    std::size_t combos = 1;
    for (std::size_t q = 0; q < depth; ++q) combos *= d;
    std::vector<int> hist(depth, 0);
    for (std::size_t idx = 0; idx < combos; ++idx) {
      std::size_t rest = idx;
      for (std::size_t q = depth; q-- > 0;) {
        hist[q] = static_cast<int>(rest % d);
        rest /= d;
      }
      Real c = static_cast<Real>(cost.memory(step - 1, node, hist));
      std::vector<std::size_t> coords = {i, i};
      for (int h : hist) coords.push_back(static_cast<std::size_t>(h));
      if (pos == SitePosition::kInterior) {
        coords.push_back(i);
        for (std::size_t q = 0; q + 1 < depth; ++q) {
          coords.push_back(static_cast<std::size_t>(hist[q]));
        }
      } else {
        c += out_cost(node, hist);
      }
      raw.push_back({flat(coords, dims), c});
    }
  }
  return Tensor::sparse(std::move(labels), std::move(dims),
                        exponentiate(raw, tau, shift));
}

// ---------------------------------------------------------------------------
// Plans

void NetworkPlan::validate() const {
  for (std::size_t s = 0; s < sites.size(); ++s) {
    const SitePlan& site = sites[s];
    if (site.position != site_position(s, sites.size())) {
      throw ConfigError("site position does not match its index");
    }
    if (site.plus.rank() != 1 || site.plus.dims()[0] != n_nodes) {
      throw ConfigError("plus tensor has the wrong shape");
    }
    if (site.layers.size() != chains.size()) {
      throw ConfigError("site " + std::to_string(s) +
                        " does not carry one tensor per chain");
    }
    for (std::size_t c = 0; c < chains.size(); ++c) {
      const LayerTensor& lt = site.layers[c];
      if (lt.spec.chain != chains[c].id) {
        throw ConfigError("chain order differs at site " + std::to_string(s));
      }
      const std::size_t expect = chains[c].bond_dims.size();
      if (lt.in_bonds.size() != (has_in_bond(site.position) ? expect : 0) ||
          lt.out_bonds.size() != (has_out_bond(site.position) ? expect : 0)) {
        throw ConfigError("bond count mismatch on chain " + chains[c].id);
      }
      for (std::size_t q = 0; q < lt.in_bonds.size(); ++q) {
        if (lt.tensor.dim(lt.in_bonds[q]) != chains[c].bond_dims[q]) {
          throw ConfigError("in-bond dimension mismatch on chain " +
                            chains[c].id);
        }
      }
      for (std::size_t q = 0; q < lt.out_bonds.size(); ++q) {
        if (lt.tensor.dim(lt.out_bonds[q]) != chains[c].bond_dims[q]) {
          throw ConfigError("out-bond dimension mismatch on chain " +
                            chains[c].id);
        }
      }
    }
  }
}

PreparedProblem prepare(const TourProblem& problem) {
  problem.validate();
  PreparedProblem out;
  out.problem = problem;
  const CostModel& c = problem.costs;
  const Variant v = problem.variant;
  out.linear_in_plus =
      v == Variant::kLinearOnly ||
      (c.has_linear() && !problem.returning && problem.n_steps < 2);
  const bool additive = v == Variant::kTsp || v == Variant::kDnsnn ||
                        v == Variant::kPtsp || v == Variant::kTspp;
  if (additive && !out.linear_in_plus &&
      (c.has_linear() || c.any_linear_forbidden())) {
    out.edge_costs = absorb_linear(c, problem);
  } else {
    out.edge_costs = c;
  }
  if (is_bottleneck_variant(v)) {
    const auto values = c.finite_values();
    if (values.empty()) throw ModelError("every edge is forbidden");
    out.max_cost = static_cast<int>(*std::max_element(values.begin(), values.end()));
    out.min_cost = static_cast<int>(*std::min_element(values.begin(), values.end()));
  }
  return out;
}

PlanFrame make_frame(const PreparedProblem& prepared, const PlanState& state) {
  const TourProblem& p = prepared.problem;
  const CostModel& costs = p.costs;
  const std::size_t n = p.n_nodes;
  const std::size_t t_steps = p.n_steps;
  const std::size_t m = state.prefix.size();
  const std::size_t fixed = m + (state.end_node ? 1 : 0);
  if (fixed > t_steps) throw std::logic_error("state longer than the route");
  for (int v : state.prefix) {
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      throw InputError("prefix node out of range");
    }
  }

  PlanFrame frame;
  frame.first_step = m;
  frame.n_sites = t_steps - fixed;

  std::vector<int> count(n, 0);
  for (int v : state.prefix) ++count[static_cast<std::size_t>(v)];
  if (state.end_node) ++count[static_cast<std::size_t>(*state.end_node)];

  // Pins at decided steps must already hold.
  for (const auto& [t, node] : costs.pins()) {
    if (t < m && state.prefix[t] != node) infeasible("pinned step violated");
    if (state.end_node && t + 1 == t_steps && *state.end_node != node) {
      infeasible("pinned last step violated");
    }
  }

  const Variant v = p.variant;
  const bool perm = is_permutation_variant(v);
  const bool counted = v == Variant::kDnsnn || v == Variant::kLinearOnly;
  std::vector<int> group_count(p.groups.size(), 0);
  if (v == Variant::kPtsp) {
    for (std::size_t a = 0; a < n; ++a) {
      group_count[static_cast<std::size_t>(p.group_of(static_cast<int>(a)))] +=
          count[a];
    }
  }

  std::vector<bool> ok(n, true);
  for (std::size_t a = 0; a < n; ++a) {
    if (perm) {
      if (count[a] > 1) infeasible("node repeated in the fixed steps");
      ok[a] = count[a] == 0;
    } else if (v == Variant::kPtsp) {
      const auto g = static_cast<std::size_t>(p.group_of(static_cast<int>(a)));
      if (group_count[g] > 1) infeasible("group repeated in the fixed steps");
      ok[a] = group_count[g] == 0;
    } else if (counted) {
      const VisitBounds b = p.bounds_of(static_cast<int>(a));
      if (count[a] > b.max_visits) infeasible("visit bound exceeded");
      ok[a] = count[a] < b.max_visits;
    }
  }

  for (std::size_t s = 0; s < frame.n_sites; ++s) {
    const std::size_t t = m + s;
    const auto pin = costs.pinned_at(t);
    std::vector<int> allowed;
    for (std::size_t a = 0; a < n; ++a) {
      const int node = static_cast<int>(a);
      if (!ok[a] || costs.linear_forbidden(t, node)) continue;
      if (pin && *pin != node) continue;
      allowed.push_back(node);
    }
    if (allowed.empty()) {
      infeasible("no candidate node for step " + std::to_string(t));
    }
    frame.allowed.push_back(std::move(allowed));
  }

  // Constraint chains.
  const auto n_sites = static_cast<int>(frame.n_sites);
  auto node_chain = [&](std::size_t a, VisitBounds b) {
    ChainSpec c;
    c.kind = (b.min_visits == 0 && b.max_visits == 1) ? LayerKind::kF
                                                      : LayerKind::kFBounds;
    c.key = static_cast<int>(a);
    c.id = "n" + std::to_string(a);
    c.filter.member.assign(n, false);
    c.filter.member[a] = true;
    c.filter.bounds = b;
    c.members = {c.key};
    return c;
  };
  if (perm) {
    std::vector<std::vector<int>> succ(n);
    if (v == Variant::kTspp) {
      auto position = [&](int node) -> std::optional<std::size_t> {
        for (std::size_t t = 0; t < m; ++t) {
          if (state.prefix[t] == node) return t;
        }
        return std::nullopt;
      };
      for (const auto& rule : p.precedence) {
        const bool after_is_end = state.end_node && *state.end_node == rule.after;
        if (state.end_node && *state.end_node == rule.before) {
          infeasible("precedence broken by the fixed last node");
        }
        const auto pa = position(rule.before);
        const auto pb = position(rule.after);
        if (pb && (!pa || *pa > *pb)) infeasible("precedence broken");
        if (!pa && !pb && !after_is_end) {
          succ[static_cast<std::size_t>(rule.before)].push_back(rule.after);
        }
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (count[a] != 0) continue;
      ChainSpec c = node_chain(a, {0, 1});
      if (!succ[a].empty()) {
        std::sort(succ[a].begin(), succ[a].end());
        c.kind = LayerKind::kFPrecedence;
        c.filter.successors.assign(n, false);
        for (int b : succ[a]) c.filter.successors[static_cast<std::size_t>(b)] = true;
        c.members = succ[a];
      }
      frame.chains.push_back(std::move(c));
    }
  } else if (v == Variant::kPtsp) {
    for (std::size_t g = 0; g < p.groups.size(); ++g) {
      if (group_count[g] != 0) continue;
      ChainSpec c;
      c.kind = LayerKind::kFGroup;
      c.key = static_cast<int>(g);
      c.id = "g" + std::to_string(g);
      c.filter.member.assign(n, false);
      for (int a : p.groups[g]) c.filter.member[static_cast<std::size_t>(a)] = true;
      c.filter.bounds = {0, 1};
      c.members = p.groups[g];
      frame.chains.push_back(std::move(c));
    }
  } else if (counted) {
    for (std::size_t a = 0; a < n; ++a) {
      const VisitBounds b = p.bounds_of(static_cast<int>(a));
      const int hi = b.max_visits - count[a];
      const int lo = std::max(0, b.min_visits - count[a]);
      if (hi <= 0) continue;
      if (lo > n_sites) infeasible("visit minimum cannot be reached");
      if (lo == 0 && hi >= n_sites) continue;
      frame.chains.push_back(node_chain(a, {lo, hi}));
    }
  }

  // Fixed edges around the free stretch.
  if (m >= 1) {
    frame.boundary.in_node = state.prefix.back();
    frame.boundary.in_step = m - 1;
  } else if (p.returning && state.end_node) {
    frame.boundary.in_node = *state.end_node;
    frame.boundary.in_step = t_steps - 1;
  }
  if (state.end_node) {
    if (t_steps >= 2) {
      frame.boundary.out_node = *state.end_node;
      frame.boundary.out_step = t_steps - 2;
    }
  } else if (p.returning && frame.n_sites > 0) {
    if (m == 0) {
      throw std::logic_error("a returning route needs one fixed node");
    }
    frame.boundary.out_node = state.prefix.front();
    frame.boundary.out_step = t_steps - 1;
  }

  if (is_bottleneck_variant(v)) {
    const bool maxmin = v == Variant::kBtspMaxMin;
    auto fold = [&](std::size_t t, int from, int to) {
      if (costs.step_forbidden(t, from, to)) infeasible("fixed edge forbidden");
      const int c = static_cast<int>(costs.step(t, from, to));
      frame.initial_cost = frame.initial_cost
                               ? (maxmin ? std::min(*frame.initial_cost, c)
                                         : std::max(*frame.initial_cost, c))
                               : c;
    };
    for (std::size_t t = 0; t + 1 < m; ++t) {
      fold(t, state.prefix[t], state.prefix[t + 1]);
    }
    if (p.returning && state.end_node && m >= 1) {
      fold(t_steps - 1, *state.end_node, state.prefix.front());
    }
  }

  if (v == Variant::kNmtsp && m >= 1) {
    for (std::size_t q = 0; q < p.memory_depth; ++q) {
      frame.history.push_back(state.prefix[m - 1 >= q ? m - 1 - q : 0]);
    }
  }
  return frame;
}

Real signed_tau(const TourProblem& problem, Real tau) {
  return problem.variant == Variant::kBtspMaxMin ? -tau : tau;
}

namespace {

LayerKind evolution_kind(Variant v) {
  if (v == Variant::kLinearOnly) return LayerKind::kPlus;
  if (v == Variant::kNmtsp) return LayerKind::kSK;
  if (is_bottleneck_variant(v)) return LayerKind::kZ;
  return LayerKind::kS;
}

bool chain_active(const ChainSpec& c, const PlanOptions& options) {
  if (!options.active_keys) return true;
  const auto& keys = *options.active_keys;
  return std::find(keys.begin(), keys.end(), c.key) != keys.end();
}

}  // namespace

SitePlan build_site(const PreparedProblem& prepared, const PlanFrame& frame,
                    std::size_t s, Real tau, const PlanOptions& options) {
  const TourProblem& p = prepared.problem;
  const std::size_t n = p.n_nodes;
  if (s >= frame.n_sites) throw std::out_of_range("site index");
  SitePlan site;
  site.step = frame.first_step + s;
  site.position = site_position(s, frame.n_sites);
  site.allowed = frame.allowed[s];

  if (prepared.linear_in_plus) {
    check_tau(tau);
    std::vector<Real> exps(n, 0);
    Real base = std::numeric_limits<Real>::infinity();
    for (int a : site.allowed) {
      exps[static_cast<std::size_t>(a)] =
          static_cast<Real>(p.costs.linear(site.step, a));
      base = std::min(base, exps[static_cast<std::size_t>(a)]);
    }
    if (!options.shift) base = 0;
    std::vector<Real> weights(n, 0);
    for (int a : site.allowed) {
      weights[static_cast<std::size_t>(a)] =
          std::exp(-tau * (exps[static_cast<std::size_t>(a)] - base));
    }
    site.plus = build_plus(site.allowed, n, weights);
  } else {
    site.plus = build_plus(site.allowed, n);
  }

  auto make_spec = [&](LayerKind kind, std::string chain, int key) {
    LayerSpec spec;
    spec.kind = kind;
    spec.site = s;
    spec.step = site.step;
    spec.chain = std::move(chain);
    spec.key = key;
    spec.allowed_nodes = site.allowed;
    return spec;
  };

  const LayerKind evo = evolution_kind(p.variant);
  if (evo != LayerKind::kPlus) {
    LayerTensor lt;
    lt.spec = make_spec(evo, "e", -1);
    std::size_t depth = 1;
    switch (evo) {
      case LayerKind::kS:
        lt.tensor = build_S_layer(prepared.edge_costs, tau, site.step,
                                  site.position, frame.boundary, options.shift);
        break;
      case LayerKind::kZ: {
        BottleneckParams bp;
        bp.tau = signed_tau(p, tau);
        bp.max_cost = prepared.max_cost;
        bp.maximize_min = p.variant == Variant::kBtspMaxMin;
        bp.offset = bp.maximize_min ? prepared.max_cost : prepared.min_cost;
        lt.tensor = build_Z_layer(prepared.edge_costs, bp, site.step,
                                  site.position, frame.boundary,
                                  frame.initial_cost);
        break;
      }
      case LayerKind::kSK: {
        depth = p.memory_depth;
        MemoryBoundary mb;
        mb.history = frame.history;
        mb.out_node = frame.boundary.out_node;
        lt.tensor = build_SK_layer(p.costs, tau, depth, site.step,
                                   site.position, mb, options.shift);
        break;
      }
      default:
        break;
    }
    lt.in_bonds = in_bond_labels(evo, site.position, depth);
    lt.out_bonds = out_bond_labels(evo, site.position, depth);
    site.layers.push_back(std::move(lt));
  }

  for (const ChainSpec& c : frame.chains) {
    if (!chain_active(c, options)) continue;
    LayerTensor lt;
    lt.spec = make_spec(c.kind, c.id, c.key);
    lt.spec.bounds = c.filter.bounds;
    lt.spec.initial_count = c.filter.initial_count;
    lt.spec.members = c.members;
    lt.tensor = build_count_filter(c.filter, site.position);
    lt.in_bonds = in_bond_labels(c.kind, site.position);
    lt.out_bonds = out_bond_labels(c.kind, site.position);
    site.layers.push_back(std::move(lt));
  }
  return site;
}

NetworkPlan build_plan(const PreparedProblem& prepared, const PlanFrame& frame,
                       Real tau, const PlanOptions& options) {
  const TourProblem& p = prepared.problem;
  NetworkPlan plan;
  plan.n_nodes = p.n_nodes;
  plan.tau = tau;
  const LayerKind evo = evolution_kind(p.variant);
  if (evo == LayerKind::kS) {
    plan.chains.push_back({"e", {p.n_nodes}});
  } else if (evo == LayerKind::kZ) {
    plan.chains.push_back(
        {"e", {p.n_nodes, static_cast<std::size_t>(prepared.max_cost)}});
  } else if (evo == LayerKind::kSK) {
    plan.chains.push_back(
        {"e", std::vector<std::size_t>(p.memory_depth, p.n_nodes)});
  }
  for (const ChainSpec& c : frame.chains) {
    if (!chain_active(c, options)) continue;
    plan.chains.push_back(
        {c.id, {static_cast<std::size_t>(c.filter.bounds.max_visits) + 1}});
    plan.active_constraints.push_back(c.key);
  }
  for (std::size_t s = 0; s < frame.n_sites; ++s) {
    plan.sites.push_back(build_site(prepared, frame, s, tau, options));
  }
  plan.validate();
  return plan;
}

NetworkPlan build_plan(const PreparedProblem& prepared, const PlanState& state,
                       Real tau, const PlanOptions& options) {
  return build_plan(prepared, make_frame(prepared, state), tau, options);
}

}  // namespace tnroute
