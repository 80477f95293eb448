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

#include "tnroute/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace tnroute {

namespace {

constexpr std::size_t kMaxUnderflowRetries = 64;

std::vector<std::pair<std::string, std::string>> in_renames(
    const LayerTensor& lt) {
  std::vector<std::pair<std::string, std::string>> r;
  for (std::size_t q = 0; q < lt.in_bonds.size(); ++q) {
    r.emplace_back(lt.in_bonds[q], bond_label(lt.spec.chain, q));
  }
  return r;
}

IndexPairing out_pairing(const LayerTensor& lt) {
  IndexPairing pairing;
  for (std::size_t q = 0; q < lt.out_bonds.size(); ++q) {
    pairing.add(bond_label(lt.spec.chain, q), lt.out_bonds[q]);
  }
  return pairing;
}

// Divides t by a power of two so its largest magnitude lies in [0.5, 1).
// Exact in floating point. Returns false when t is all zero.
bool rescale(Tensor& t, long& log2_scale) {
  const Real peak = t.max_abs();
  if (!(peak > 0)) return false;
  int e = 0;
  std::frexp(peak, &e);
  t.scale_in_place(std::ldexp(Real{1}, -e));
  log2_scale += e;
  return true;
}

}  // namespace

Tensor SweepResult::unscaled_p() const {
  Tensor out = p;
  for (Real& v : out.mutable_data()) v = std::ldexp(v, static_cast<int>(log2_scale));
  return out;
}

Tensor absorb_site(const SitePlan& site, const Tensor& w,
                   ContractionStats* stats) {
  std::size_t first_filter = 0;
  Tensor r;
  if (!site.layers.empty() && site.layers.front().spec.chain == "e") {
    const LayerTensor& evo = site.layers.front();
    const Tensor weighted = contract(evo.tensor, site.plus, {{"i", "i"}}, stats);
    r = contract(w, weighted, out_pairing(evo), stats);
    auto renames = in_renames(evo);
    renames.emplace_back("j", "p");
    r = r.relabeled(renames);
    first_filter = 1;
  } else {
    r = contract(w, site.plus, {}, stats).relabeled({{"i", "p"}});
  }
  for (std::size_t c = first_filter; c < site.layers.size(); ++c) {
    const LayerTensor& f = site.layers[c];
    IndexPairing pairing = out_pairing(f);
    pairing.add("p", "i");
    r = contract(r, f.tensor, pairing, stats);
    auto renames = in_renames(f);
    renames.emplace_back("j", "p");
    r = r.relabeled(renames);
  }
  if (has_in_bond(site.position)) return trace_index(r, "p");
  return r.to_dense();
}

SweepResult sweep(const NetworkPlan& plan, const SweepOptions& options) {
  const std::size_t n = plan.sites.size();
  if (n == 0) throw std::logic_error("sweep over an empty plan");
  SweepResult res;
  if (options.keep_cache) res.env.assign(n + 1, Tensor());
  Tensor w = Tensor::scalar(1);
  if (options.keep_cache) res.env[n] = w;

  for (std::size_t s = n; s-- > 0;) {
    Tensor r = absorb_site(plan.sites[s], w, &res.stats);
    if (s == 0) {
      res.p = std::move(r);
      break;
    }
    if (!rescale(r, res.log2_scale)) {
      res.p = Tensor::zeros({"p"}, {plan.n_nodes});
      res.env.clear();
      return res;
    }
    if (options.mps_bond && r.rank() > 1) {
      std::vector<std::string> order = r.labels();
      std::sort(order.begin(), order.end());
      const MPSChain chain = mps_truncate(r.permuted(order), *options.mps_bond);
      const double e = chain.truncation_error();
      res.truncation_error =
          std::sqrt(res.truncation_error * res.truncation_error + e * e);
      r = chain.to_tensor();
    }
    res.peak_w_elements = std::max(res.peak_w_elements, r.size());
    res.peak_w_nonzeros = std::max(res.peak_w_nonzeros, r.count_nonzero());
    w = std::move(r);
    if (options.keep_cache) res.env[s] = w;
  }
  rescale(res.p, res.log2_scale);
  return res;
}

Real network_amplitude(const NetworkPlan& plan,
                       std::span<const int> assignment) {
  if (assignment.size() != plan.sites.size()) {
    throw InputError("assignment length differs from the number of sites");
  }
  Tensor w = Tensor::scalar(1);
  Real weight = 1;
  for (std::size_t s = plan.sites.size(); s-- > 0;) {
    const SitePlan& site = plan.sites[s];
    const int x = assignment[s];
    if (x < 0 || static_cast<std::size_t>(x) >= plan.n_nodes) {
      throw InputError("assignment node out of range");
    }
    const auto xs = static_cast<std::size_t>(x);
    weight *= site.plus.at({xs});
    if (weight == 0) return 0;
    for (const LayerTensor& lt : site.layers) {
      const Tensor local = lt.tensor.sliced("i", xs).sliced("j", xs);
      w = contract(w, local, out_pairing(lt)).relabeled(in_renames(lt));
    }
  }
  if (w.rank() != 0) throw std::logic_error("dangling bonds in the plan");
  return weight * w.to_dense().data()[0];
}

// ---------------------------------------------------------------------------
// Anchors and tau

std::vector<std::optional<int>> end_anchors(const TourProblem& problem) {
  if (problem.fixed_end) return {problem.fixed_end};
  if (!problem.returning || problem.fixed_start) return {std::nullopt};

  const auto n = static_cast<int>(problem.n_nodes);
  const CostModel& c = problem.costs;
  const auto last_pin = c.pinned_at(problem.n_steps - 1);
  if (last_pin) return {*last_pin};

  std::vector<int> nodes;
  const bool invariant = c.time_constant() && !c.has_linear() &&
                         !c.any_linear_forbidden() && c.pins().empty() &&
                         problem.variant != Variant::kTspp;
  if (invariant) {
    switch (problem.variant) {
      case Variant::kTsp:
      case Variant::kBtspMinMax:
      case Variant::kBtspMaxMin:
        nodes = {n - 1};
        break;
      case Variant::kDnsnn:
        for (int a = n - 1; a >= 0; --a) {
          if (problem.bounds_of(a).min_visits >= 1) {
            nodes = {a};
            break;
          }
        }
        break;
      case Variant::kPtsp: {
        std::size_t best = 0;
        for (std::size_t g = 1; g < problem.groups.size(); ++g) {
          if (problem.groups[g].size() < problem.groups[best].size()) best = g;
        }
        nodes = problem.groups[best];
        std::sort(nodes.begin(), nodes.end());
        break;
      }
      default:
        break;
    }
  }
  if (nodes.empty()) {
    for (int a = 0; a < n; ++a) {
      if (problem.bounds_of(a).max_visits >= 1) nodes.push_back(a);
    }
  }
  return {nodes.begin(), nodes.end()};
}

namespace {

struct TauScale {
  double tau = 1.0;
  double cap = std::numeric_limits<double>::infinity();
  double spread = 0.0;
};

std::vector<double> objective_values(const PreparedProblem& prepared) {
  const TourProblem& p = prepared.problem;
  if (p.variant == Variant::kLinearOnly || p.variant == Variant::kNmtsp) {
    return p.costs.finite_values();
  }
  std::vector<double> v = prepared.edge_costs.finite_values();
  if (prepared.linear_in_plus) {
    for (std::size_t t = 0; t < p.n_steps; ++t) {
      for (std::size_t a = 0; a < p.n_nodes; ++a) {
        v.push_back(p.costs.linear(t, static_cast<int>(a)));
      }
    }
  }
  return v;
}

TauScale tau_scale(const PreparedProblem& prepared, std::size_t n_free) {
  const TourProblem& p = prepared.problem;
  std::vector<double> values = objective_values(prepared);
  TauScale out;
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const double range = values.back() - values.front();
  const double terms =
      is_bottleneck_variant(p.variant) ? 1.0 : static_cast<double>(p.n_steps);
  out.spread = range * terms;
  if (!(out.spread > 0)) return out;

  // Log of an upper bound on the number of completions.
  const double log_count =
      is_permutation_variant(p.variant)
          ? std::lgamma(static_cast<double>(n_free) + 1.0)
          : static_cast<double>(n_free) *
                std::log(static_cast<double>(std::max<std::size_t>(p.n_nodes, 1)));

  // Smallest possible gap between two distinct objective values.
  bool integral = true;
  for (double v : values) {
    if (v != std::floor(v) || std::fabs(v) > 9e15) integral = false;
  }
  double gap = 0;
  if (integral) {
    std::int64_t g = 0;
    const auto base = static_cast<std::int64_t>(values.front());
    for (double v : values) g = std::gcd(g, static_cast<std::int64_t>(v) - base);
    gap = static_cast<double>(g);
  } else {
    gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < values.size(); ++k) {
      gap = std::min(gap, values[k] - values[k - 1]);
    }
  }
  out.cap = kMaxExponent / out.spread;
  out.tau = std::max((std::log(1e6) + log_count) / out.spread,
                     (std::log(2.0) + log_count) / gap);
  out.tau = std::min(out.tau, out.cap);
  return out;
}

std::size_t initial_free_steps(const PreparedProblem& prepared,
                               std::optional<int> end) {
  const TourProblem& p = prepared.problem;
  std::size_t fixed = (p.fixed_start ? 1 : 0) + (end ? 1 : 0);
  if (p.fixed_start && end && p.n_steps == 1) fixed = 1;
  return p.n_steps > fixed ? p.n_steps - fixed : 0;
}


struct RunContext {
  const PreparedProblem& prepared;
  const SolverConfig& config;
  std::mt19937_64& rng;
  const SelectionHistory& history;
};

bool all_zero(const Tensor& p) {
  for (Real v : p.data()) {
    if (v > 0) return false;
  }
  return true;
}

std::vector<std::size_t> tie_set(const Tensor& p, double rel_tol) {
  Real best = 0;
  for (Real v : p.data()) best = std::max(best, v);
  std::vector<std::size_t> out;
  const Real threshold = (Real{1} - static_cast<Real>(rel_tol)) * best;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.data()[i] > 0 && p.data()[i] >= threshold) out.push_back(i);
  }
  return out;
}

Tensor clamp_nonnegative(Tensor p) {
  for (Real& v : p.mutable_data()) v = std::max(v, Real{0});
  return p;
}

std::vector<LayerCandidate> candidates_for(const PreparedProblem& prepared,
                                           const PlanFrame& frame,
                                           const PlanState& state) {
  const TourProblem& p = prepared.problem;
  std::optional<int> last;
  std::size_t step = 0;
  if (!state.prefix.empty()) {
    last = state.prefix.back();
    step = state.prefix.size() - 1;
  } else if (p.returning && state.end_node) {
    last = state.end_node;
    step = p.n_steps - 1;
  }
  const CostModel& c = prepared.edge_costs;
  auto closeness = [&](int node) {
    if (!last || !c.has_step_costs()) return 0.0;
    if (c.step_forbidden(step, *last, node)) {
      return std::numeric_limits<double>::infinity();
    }
    return c.step(step, *last, node);
  };
  std::vector<LayerCandidate> out;
  for (const ChainSpec& chain : frame.chains) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < chain.filter.member.size(); ++a) {
      if (chain.filter.member[a]) best = std::min(best, closeness(static_cast<int>(a)));
    }
    out.push_back({chain.key, best});
  }
  return out;
}

Solution run_anchor(const RunContext& ctx, std::optional<int> end) {
  const PreparedProblem& prepared = ctx.prepared;
  const TourProblem& problem = prepared.problem;
  const SolverConfig& config = ctx.config;
  const bool auto_mode = !config.tau.has_value();
  const bool exact_layers = config.approx.strategy == ApproxStrategy::kAll;
  const bool use_reuse = config.reuse && config.approx.exact();
  const std::size_t default_k = (problem.n_nodes + 3) / 4;
  SweepOptions sweep_options;
  sweep_options.mps_bond = config.approx.mps_bond;

  PlanState state;
  if (problem.fixed_start) state.prefix.push_back(*problem.fixed_start);
  state.end_node = end;
  if (problem.fixed_start && end && problem.n_steps == 1) state.end_node.reset();

  const TauScale scale = tau_scale(prepared, initial_free_steps(prepared, end));
  double tau = auto_mode ? scale.tau : *config.tau;
  if (!auto_mode && tau * scale.spread > kMaxExponent) {
    throw NoSurvivingState(
        "amplitude underflow: tau * cost range exceeds the representable "
        "range; lower tau or use automatic tau",
        std::nullopt, false);
  }

  Solution sol;
  sol.tau_trace.push_back(tau);
  std::optional<CachedSweep> cache;
  std::size_t underflow_retries = 0;

  while (true) {
    const PlanFrame frame = make_frame(prepared, state);
    if (frame.n_sites == 0) break;
    const auto started = std::chrono::steady_clock::now();
    IterationStats it;

    const bool forced = std::all_of(
        frame.allowed.begin(), frame.allowed.end(),
        [](const std::vector<int>& a) { return a.size() == 1; });
    if (forced) {
      for (const auto& a : frame.allowed) state.prefix.push_back(a.front());
      if (exact_layers) {
        Route filled = state.prefix;
        if (state.end_node) filled.push_back(*state.end_node);
        if (!check_feasible(problem, filled).feasible ||
            !route_cost(problem, filled)) {
          throw NoSurvivingState("no feasible completion of the route",
                                 frame.first_step, true);
        }
      }
      it.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - started)
                       .count();
      sol.iterations.push_back(it);
      sol.tie_counts.push_back(1);
      if (!exact_layers) sol.active_layers.emplace_back();
      break;
    }

    PlanOptions options;
    options.shift = true;
    if (!exact_layers) {
      const auto cands = candidates_for(prepared, frame, state);
      options.active_keys =
          select_layers(cands, ctx.history, config.approx, default_k, ctx.rng);
    }

    ContractionStats stats;
    auto full_sweep = [&](double t, bool keep) {
      const NetworkPlan plan = build_plan(prepared, frame, t, options);
      SweepOptions so = sweep_options;
      so.keep_cache = keep;
      SweepResult sr = sweep(plan, so);
      stats.multiply_adds += sr.stats.multiply_adds;
      it.peak_w_elements = std::max(it.peak_w_elements, sr.peak_w_elements);
      sol.truncation_error = std::max(sol.truncation_error, sr.truncation_error);
      it.active_layers = plan.active_constraints.size();
      if (keep) {
        cache = CachedSweep{frame, t, std::move(sr.env)};
      }
      return clamp_nonnegative(sr.p);
    };
    auto amplitudes = [&](double t) {
      // A lone final site has nothing cached to its right.
      if (use_reuse && cache && cache->tau == t && frame.n_sites >= 2 &&
          frame.first_step > cache->frame.first_step) {
        it.active_layers = cache->frame.chains.size();
        return cached_amplitudes(prepared, *cache, state, &stats);
      }
      return full_sweep(t, use_reuse);
    };

    Tensor p = amplitudes(tau);
    if (all_zero(p)) {
      PlanOptions zero_options = options;
      zero_options.shift = false;
      const NetworkPlan plan0 = build_plan(prepared, frame, 0.0, zero_options);
      const SweepResult counts = sweep(plan0);
      stats.multiply_adds += counts.stats.multiply_adds;
      if (all_zero(counts.p)) {
        throw NoSurvivingState("no feasible completion of the route",
                               frame.first_step, true);
      }
      if (!auto_mode || underflow_retries >= kMaxUnderflowRetries) {
        throw NoSurvivingState("amplitude underflow at tau = " +
                                   std::to_string(tau),
                               frame.first_step, false);
      }
      ++underflow_retries;
      tau /= 2;
      sol.tau_trace.push_back(tau);
      cache.reset();
      continue;
    }

    std::vector<std::size_t> ties = tie_set(p, config.tie_rel_tol);
    if (auto_mode && ties.size() > 1) {
      for (std::size_t retry = 0;; ++retry) {
        if (retry == config.max_tau_retries) {
          sol.tau_unconverged = true;
          break;
        }
        const double doubled = tau * 2;
        if (doubled > scale.cap) break;
        const Tensor p2 = full_sweep(doubled, false);
        if (all_zero(p2)) break;
        const auto ties2 = tie_set(p2, config.tie_rel_tol);
        if (ties2 == ties) break;  // genuine degeneracy
        tau = doubled;
        sol.tau_trace.push_back(tau);
        p = p2;
        ties = ties2;
        if (ties.size() == 1) break;
      }
    }

    const ArgmaxResult pick = argmax_with_ties(p, config.tie_rel_tol, ctx.rng);
    state.prefix.push_back(static_cast<int>(pick.index));
    sol.tie_counts.push_back(pick.tie_count);
    if (pick.tie_count > 1) ++sol.degenerate_choices;
    if (!exact_layers) {
      sol.active_layers.push_back(options.active_keys ? *options.active_keys
                                                      : std::vector<int>{});
    }
    it.multiply_adds = stats.multiply_adds;
    it.tie_count = pick.tie_count;
    it.seconds = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - started)
                     .count();
    sol.iterations.push_back(it);
  }

  sol.route = state.prefix;
  if (state.end_node) sol.route.push_back(*state.end_node);
  sol.tau_used = tau;
  for (const auto& it : sol.iterations) {
    sol.multiply_adds += it.multiply_adds;
    sol.peak_w_elements = std::max(sol.peak_w_elements, it.peak_w_elements);
  }
  sol.cost = route_cost(problem, sol.route);
  const FeasibilityReport report = check_feasible(problem, sol.route);
  sol.feasible = report.feasible && sol.cost.has_value();
  sol.violations = report.violations;
  return sol;
}

bool better(const TourProblem& problem, const Solution& a, const Solution& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.cost && b.cost) return objective_better(problem, *a.cost, *b.cost);
  return a.cost.has_value() && !b.cost.has_value();
}

std::vector<int> failed_keys(const TourProblem& problem, const Solution& sol) {
  std::vector<int> keys;
  for (const Violation& v : sol.violations) {
    for (int node : v.nodes) {
      const int key =
          problem.variant == Variant::kPtsp ? problem.group_of(node) : node;
      if (key >= 0 && std::find(keys.begin(), keys.end(), key) == keys.end()) {
        keys.push_back(key);
      }
    }
  }
  return keys;
}

}  // namespace

Tensor cached_amplitudes(const PreparedProblem& prepared,
                         const CachedSweep& cache, const PlanState& state,
                         ContractionStats* stats) {
  const PlanFrame frame = make_frame(prepared, state);
  const std::size_t base_step = cache.frame.first_step;
  const std::size_t m = frame.first_step;
  if (m <= base_step || m - base_step >= cache.frame.n_sites ||
      cache.env.size() != cache.frame.n_sites + 1 ||
      frame.first_step + frame.n_sites !=
          base_step + cache.frame.n_sites) {
    throw std::invalid_argument("state is not a continuation of the cache");
  }
  Tensor v = cache.env[m - base_step + 1];

  // Base chains with counts advanced over the steps fixed since the sweep.
  PlanFrame hybrid = frame;
  hybrid.chains.clear();
  for (const ChainSpec& base : cache.frame.chains) {
    ChainSpec c = base;
    for (std::size_t t = base_step; t < m; ++t) {
      if (c.filter.member[static_cast<std::size_t>(state.prefix[t])]) {
        ++c.filter.initial_count;
      }
    }
    if (c.filter.initial_count > c.filter.bounds.max_visits) {
      return Tensor::zeros({"p"}, {prepared.problem.n_nodes});
    }
    if (c.filter.initial_count == c.filter.bounds.max_visits) {
      // Exhausted: members are gone from every domain; pin the bond.
      if (v.has_label(bond_label(c.id))) {
        v = v.sliced(bond_label(c.id),
                     static_cast<std::size_t>(c.filter.bounds.max_visits));
      }
      continue;
    }
    // Only counts c and c + 1 are reachable after this site; keep those
    // two bond values and build the filter relative to c.
    const std::string label = bond_label(c.id);
    if (c.filter.bounds.max_visits > 1 && v.has_label(label)) {
      v = v.narrowed(label, static_cast<std::size_t>(c.filter.initial_count), 2);
      c.filter.bounds = {0, 1};
      c.filter.initial_count = 0;
    }
    hybrid.chains.push_back(std::move(c));
  }
  PlanOptions options;
  options.shift = true;
  const SitePlan site = build_site(prepared, hybrid, 0, cache.tau, options);
  return absorb_site(site, v, stats);
}

double auto_tau(const TourProblem& problem, const SolverConfig& config) {
  (void)config;
  const PreparedProblem prepared = prepare(problem);
  const auto anchors = end_anchors(problem);
  return tau_scale(prepared, initial_free_steps(prepared, anchors.front())).tau;
}

Solution solve(const TourProblem& problem, const SolverConfig& config) {
  if (config.tau && (std::isnan(*config.tau) || *config.tau < 0)) {
    throw ConfigError("tau must be a nonnegative number");
  }
  const PreparedProblem prepared = prepare(problem);
  std::mt19937_64 rng(config.seed);
  SelectionHistory history;
  const std::size_t rounds =
      config.approx.strategy == ApproxStrategy::kFromFailures
          ? std::max<std::size_t>(1, config.approx.max_failure_rounds)
          : 1;

  std::optional<Solution> best;
  std::uint64_t total_madds = 0;
  std::optional<NoSurvivingState> last_error;
  for (std::size_t round = 0; round < rounds; ++round) {
    const RunContext ctx{prepared, config, rng, history};
    std::optional<Solution> round_best;
    for (const auto& anchor : end_anchors(problem)) {
      try {
        Solution sol = run_anchor(ctx, anchor);
        total_madds += sol.multiply_adds;
        if (!round_best || better(problem, sol, *round_best)) {
          round_best = std::move(sol);
        }
      } catch (const NoSurvivingState& e) {
        if (!e.infeasible()) throw;
        last_error = e;
      }
    }
    if (round_best && (!best || better(problem, *round_best, *best))) {
      best = std::move(round_best);
    }
    if (!best || best->feasible) break;
    history.failed_keys = failed_keys(problem, *best);
  }
  if (!best) {
    throw last_error.value_or(
        NoSurvivingState("no feasible route", std::nullopt, true));
  }
  best->multiply_adds = total_madds;
  return *best;
}

Solution solve_with_reuse(const TourProblem& problem, SolverConfig config) {
  config.reuse = true;
  return solve(problem, config);
}

}  // namespace tnroute
