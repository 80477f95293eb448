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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "support/instances.hpp"
#include "support/networks.hpp"
#include "tnroute/layers.hpp"
#include "tnroute/problem.hpp"

namespace tnroute {
namespace {

using testing::ChainBuilder;
using testing::entry;
using testing::filter_plan;
using testing::for_each_assignment;
using testing::random_matrix;
using testing::survivors;

constexpr SitePosition kPositions[] = {SitePosition::kFirst,
                                       SitePosition::kInterior,
                                       SitePosition::kLast, SitePosition::kOnly};

ChainBuilder f_chain(int a, std::size_t n) {
  return {"n" + std::to_string(a), LayerKind::kF,
          [a, n](SitePosition pos) { return build_F_layer(a, pos, n); }};
}

std::size_t count_with(const std::vector<std::vector<int>>& xs, int a,
                       std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(
      std::count_if(xs.begin(), xs.end(), [&](const std::vector<int>& x) {
        const auto c = static_cast<std::size_t>(std::count(x.begin(), x.end(), a));
        return c >= lo && c <= hi;
      }));
}

TEST(Plus, AllowedEntriesAreOne) {
  const std::vector<int> all{0, 1, 2};
  const Tensor p = build_plus(all, 3);
  EXPECT_EQ(p.to_dense().data(), (std::vector<Real>{1, 1, 1}));
  const std::vector<int> without_one{0, 2};
  EXPECT_EQ(build_plus(without_one, 3).to_dense().data(),
            (std::vector<Real>{1, 0, 1}));
  EXPECT_THROW(build_plus(std::vector<int>{}, 3), NoSurvivingState);
}

TEST(Plus, OneFewerCandidatePerIteration) {
  std::mt19937_64 rng(2);
  const TourProblem p = make_tsp(5, random_matrix(rng, 5, 1, 9));
  const PreparedProblem prepared = prepare(p);
  PlanState state;
  state.end_node = 4;
  for (std::size_t k = 0; k < 4; ++k) {
    const PlanFrame frame = make_frame(prepared, state);
    const SitePlan site = build_site(prepared, frame, 0, 1.0, {});
    EXPECT_EQ(site.plus.count_nonzero(), 4 - k);
    state.prefix.push_back(static_cast<int>(k));
  }
}

TEST(SLayer, ZeroTauGivesUnitEntries) {
  std::mt19937_64 rng(3);
  const CostModel c = CostModel::constant(4, 4, random_matrix(rng, 4, 1, 50));
  EdgeBoundary b{2, 0, 3, 3};
  for (SitePosition pos : kPositions) {
    const Tensor s = build_S_layer(c, 0.0, 1, pos, b);
    for (Real v : s.values()) EXPECT_EQ(v, 1);
    EXPECT_GT(s.stored(), 0u);
  }
}

TEST(SLayer, InteriorElementValue) {
  const CostModel c = CostModel::constant(3, 3, std::vector<double>(9, 2.0));
  const Tensor s = build_S_layer(c, 0.5, 1, SitePosition::kInterior, {});
  EXPECT_EQ(s.labels(), (std::vector<std::string>{"i", "j", "k", "l"}));
  const Real v = entry(s, {{"i", 1}, {"j", 1}, {"k", 0}, {"l", 1}});
  EXPECT_NEAR(static_cast<double>(v), 0.36787944117144233, 1e-15);
  EXPECT_EQ(entry(s, {{"i", 1}, {"j", 1}, {"k", 0}, {"l", 2}}), 0);
  EXPECT_EQ(entry(s, {{"i", 1}, {"j", 2}, {"k", 0}, {"l", 1}}), 0);
}

TEST(SLayer, ForbiddenEdgesAreZeroAndNegativeTauRejected) {
  CostModel c = CostModel::constant(3, 3, std::vector<double>(9, 1.0));
  c.forbid_edge(0, 2);
  const Tensor s = build_S_layer(c, 1.0, 1, SitePosition::kInterior, {});
  EXPECT_EQ(entry(s, {{"i", 2}, {"j", 2}, {"k", 0}, {"l", 2}}), 0);
  EXPECT_GT(entry(s, {{"i", 2}, {"j", 2}, {"k", 1}, {"l", 2}}), 0);
  EXPECT_THROW(build_S_layer(c, -1.0, 1, SitePosition::kInterior, {}),
               ConfigError);
}

TEST(SLayer, NetworkAmplitudeIsBoltzmannWeight) {
  std::mt19937_64 rng(4);
  const TourProblem p = make_tsp(4, random_matrix(rng, 4, 1, 20));
  const PreparedProblem prepared = prepare(p);
  PlanState state;
  state.end_node = 3;
  const double tau = 0.3;
  const NetworkPlan plan = build_plan(prepared, state, tau);
  std::size_t feasible = 0;
  for_each_assignment(4, 3, [&](const std::vector<int>& x) {
    Route r = x;
    r.push_back(3);
    const Real a = network_amplitude(plan, x);
    if (check_feasible(p, r).feasible) {
      ++feasible;
      const double expected = std::exp(-tau * *route_cost(p, r));
      EXPECT_NEAR(static_cast<double>(a) / expected, 1.0, 1e-12);
    } else {
      EXPECT_EQ(a, 0);
    }
  });
  EXPECT_EQ(feasible, 6u);
}

TEST(FLayer, InteriorHasNineteenNonzerosForTenNodes) {
  const Tensor f = build_F_layer(4, SitePosition::kInterior, 10);
  EXPECT_EQ(f.size(), 400u);
  EXPECT_EQ(f.count_nonzero(), 19u);
  EXPECT_TRUE(f.is_sparse());
}

TEST(FLayer, ElementTables) {
  const std::size_t n = 3;
  const int a = 1;
  const Tensor first = build_F_layer(a, SitePosition::kFirst, n);
  const Tensor mid = build_F_layer(a, SitePosition::kInterior, n);
  const Tensor last = build_F_layer(a, SitePosition::kLast, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        const bool is_a = static_cast<int>(i) == a;
        EXPECT_EQ(entry(first, {{"i", i}, {"j", j}, {"l", k}}),
                  (i == j && ((is_a && k == 1) || (!is_a && k == 0))) ? 1 : 0);
        EXPECT_EQ(entry(last, {{"i", i}, {"j", j}, {"k", k}}),
                  (i == j && !(is_a && k == 1)) ? 1 : 0);
        for (std::size_t l = 0; l < 2; ++l) {
          const bool on = i == j && ((is_a && k == 0 && l == 1) ||
                                     (!is_a && k == l));
          EXPECT_EQ(entry(mid, {{"i", i}, {"j", j}, {"k", k}, {"l", l}}),
                    on ? 1 : 0);
        }
      }
    }
  }
}

TEST(FLayer, SingleChainKeepsAssignmentsWithAtMostOneA) {
  const NetworkPlan plan = filter_plan(3, 3, {f_chain(0, 3)});
  bool binary = false;
  const auto alive = survivors(plan, &binary);
  EXPECT_TRUE(binary);
  EXPECT_EQ(alive.size(), 20u);
  EXPECT_EQ(count_with(alive, 0, 0, 1), 20u);
  EXPECT_EQ(count_with(alive, 0, 1, 1), 12u);
}

TEST(FLayer, AllChainsGiveLeviCivitaSquared) {
  const NetworkPlan plan =
      filter_plan(3, 3, {f_chain(0, 3), f_chain(1, 3), f_chain(2, 3)});
  const auto alive = survivors(plan);
  EXPECT_EQ(alive.size(), 6u);
  for (auto x : alive) {
    std::sort(x.begin(), x.end());
    EXPECT_EQ(x, (std::vector<int>{0, 1, 2}));
  }
}

TEST(FBounds, UnitBoundsMatchPlainFilterBeforeTheLastSite) {
  for (SitePosition pos : {SitePosition::kFirst, SitePosition::kInterior}) {
    const Tensor plain = build_F_layer(2, pos, 4);
    const Tensor bounded = build_F_bounds_layer(2, {1, 1}, pos, 4);
    EXPECT_EQ(bounded.dims(), plain.dims());
    EXPECT_EQ(max_abs_difference(plain, bounded), 0);
  }
  // The last site differs only in rejecting a count of zero.
  const Tensor plain = build_F_layer(2, SitePosition::kLast, 4);
  const Tensor bounded = build_F_bounds_layer(2, {1, 1}, SitePosition::kLast, 4);
  EXPECT_EQ(entry(plain, {{"i", 0}, {"j", 0}, {"k", 0}}), 1);
  EXPECT_EQ(entry(bounded, {{"i", 0}, {"j", 0}, {"k", 0}}), 0);
  EXPECT_EQ(entry(bounded, {{"i", 2}, {"j", 2}, {"k", 0}}), 1);
}

TEST(FBounds, OneOrTwoZerosOutOfEight) {
  const ChainBuilder c{"n0", LayerKind::kFBounds, [](SitePosition pos) {
                         return build_F_bounds_layer(0, {1, 2}, pos, 2);
                       }};
  const auto alive = survivors(filter_plan(2, 3, {c}));
  EXPECT_EQ(alive.size(), 6u);
  EXPECT_EQ(count_with(alive, 0, 1, 2), 6u);
  EXPECT_EQ(build_F_bounds_layer(0, {1, 2}, SitePosition::kInterior, 2).dim("k"),
            3u);
}

TEST(FBounds, FullRangePassesEverything) {
  const ChainBuilder c{"n0", LayerKind::kFBounds, [](SitePosition pos) {
                         return build_F_bounds_layer(0, {0, 3}, pos, 2);
                       }};
  EXPECT_EQ(survivors(filter_plan(2, 3, {c})).size(), 8u);
  EXPECT_THROW(build_F_bounds_layer(0, {0, 0}, SitePosition::kFirst, 2),
               ModelError);
}

TEST(GroupFilter, SingletonEqualsPlainFilter) {
  const std::vector<int> group{2};
  for (SitePosition pos : kPositions) {
    EXPECT_EQ(max_abs_difference(build_group_filter(group, pos, 4),
                                 build_F_layer(2, pos, 4)),
              0);
  }
}

TEST(GroupFilter, OneNodePerGroup) {
  auto group = [](std::vector<int> members, std::string id) {
    return ChainBuilder{std::move(id), LayerKind::kFGroup,
                        [members](SitePosition pos) {
                          return build_group_filter(members, pos, 4);
                        }};
  };
  const auto alive =
      survivors(filter_plan(4, 2, {group({0, 1}, "g0"), group({2, 3}, "g1")}));
  EXPECT_EQ(alive.size(), 8u);
  for (const auto& x : alive) EXPECT_NE(x[0] < 2, x[1] < 2);
}

TEST(GroupFilter, WholeNodeSetOnOneSite) {
  const ChainBuilder c{"g0", LayerKind::kFGroup, [](SitePosition pos) {
                         return build_group_filter(std::vector<int>{0, 1, 2, 3},
                                                   pos, 4);
                       }};
  EXPECT_EQ(survivors(filter_plan(4, 1, {c})).size(), 4u);
}

TEST(PrecedenceFilter, EmptySuccessorsIsPlainFilter) {
  for (SitePosition pos : kPositions) {
    EXPECT_EQ(max_abs_difference(
                  build_precedence_filter(1, std::vector<int>{}, pos, 3),
                  build_F_layer(1, pos, 3)),
              0);
  }
}

TEST(PrecedenceFilter, HalfOfThePermutationsSurvive) {
  const ChainBuilder rule{"n0", LayerKind::kFPrecedence, [](SitePosition pos) {
                            return build_precedence_filter(
                                0, std::vector<int>{2}, pos, 3);
                          }};
  const auto alive = survivors(filter_plan(3, 3, {rule, f_chain(1, 3), f_chain(2, 3)}));
  ASSERT_EQ(alive.size(), 3u);
  for (const auto& x : alive) {
    EXPECT_LT(std::find(x.begin(), x.end(), 0), std::find(x.begin(), x.end(), 2));
  }
}

TEST(PrecedenceFilter, ChainedRulesLeaveOnePermutation) {
  const ChainBuilder r0{"n0", LayerKind::kFPrecedence, [](SitePosition pos) {
                          return build_precedence_filter(0, std::vector<int>{1},
                                                         pos, 3);
                        }};
  const ChainBuilder r1{"n1", LayerKind::kFPrecedence, [](SitePosition pos) {
                          return build_precedence_filter(1, std::vector<int>{2},
                                                         pos, 3);
                        }};
  const auto alive = survivors(filter_plan(3, 3, {r0, r1, f_chain(2, 3)}));
  ASSERT_EQ(alive.size(), 1u);
  EXPECT_EQ(alive.front(), (std::vector<int>{0, 1, 2}));
}

TEST(Filters, AreBinaryDiagonalProjectors) {
  std::vector<Tensor> all;
  for (SitePosition pos : kPositions) {
    all.push_back(build_F_layer(1, pos, 3));
    all.push_back(build_F_bounds_layer(0, {1, 2}, pos, 3));
    all.push_back(build_group_filter(std::vector<int>{0, 2}, pos, 3));
    all.push_back(build_precedence_filter(0, std::vector<int>{1}, pos, 3));
  }
  for (const Tensor& t : all) {
    const Tensor d = t.to_dense();
    const std::size_t ai = d.axis("i");
    const std::size_t aj = d.axis("j");
    for (std::size_t k = 0; k < d.size(); ++k) {
      const Real v = d.data()[k];
      ASSERT_TRUE(v == 0 || v == 1);
      if (v == 0) continue;
      // Decode the row-major offset.
      std::vector<std::size_t> coords(d.rank());
      std::size_t rest = k;
      for (std::size_t ax = d.rank(); ax-- > 0;) {
        coords[ax] = rest % d.dims()[ax];
        rest /= d.dims()[ax];
      }
      EXPECT_EQ(coords[ai], coords[aj]);
    }
  }
  // Applying the assembled projector twice changes nothing.
  const NetworkPlan plan =
      filter_plan(3, 3, {f_chain(0, 3), f_chain(1, 3)});
  for_each_assignment(3, 3, [&](const std::vector<int>& x) {
    const Real a = network_amplitude(plan, x);
    EXPECT_EQ(a * a, a);
  });
}

TEST(ZLayer, EqualCostsGiveEqualAmplitudes) {
  TourProblem p = make_tsp(4, std::vector<double>(16, 3.0));
  p.variant = Variant::kBtspMinMax;
  const PreparedProblem prepared = prepare(p);
  PlanState state;
  state.end_node = 3;
  const NetworkPlan plan = build_plan(prepared, state, 0.7);
  for_each_assignment(4, 3, [&](const std::vector<int>& x) {
    Route r = x;
    r.push_back(3);
    const Real a = network_amplitude(plan, x);
    if (check_feasible(p, r).feasible) {
      // Offset by the cheapest edge of the instance (3).
      EXPECT_EQ(a, 1);
    } else {
      EXPECT_EQ(a, 0);
    }
  });
}

TEST(ZLayer, ArgmaxTourHasOptimalBottleneck) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    TourProblem p = make_tsp(4, random_matrix(rng, 4, 1, 5));
    p.variant = Variant::kBtspMinMax;
    const PreparedProblem prepared = prepare(p);
    PlanState state;
    state.end_node = 3;
    const NetworkPlan plan = build_plan(prepared, state, 5.0);
    Real best_amp = -1;
    double best_amp_cost = 0;
    double brute = 1e9;
    for_each_assignment(4, 3, [&](const std::vector<int>& x) {
      Route r = x;
      r.push_back(3);
      if (!check_feasible(p, r).feasible) return;
      const double c = *route_cost(p, r);
      brute = std::min(brute, c);
      const Real a = network_amplitude(plan, x);
      EXPECT_NEAR(static_cast<double>(a),
                  std::exp(-5.0 * (c - prepared.min_cost)), 1e-12);
      if (a > best_amp) {
        best_amp = a;
        best_amp_cost = c;
      }
    });
    EXPECT_EQ(best_amp_cost, brute);
  }
}

TEST(ZLayer, UnitCostRangeHasUnitBond) {
  CostModel c = CostModel::constant(3, 3, std::vector<double>(9, 1.0));
  BottleneckParams bp;
  bp.tau = 1.0;
  bp.max_cost = 1;
  bp.offset = 1;
  const Tensor z = build_Z_layer(c, bp, 1, SitePosition::kInterior, {});
  EXPECT_EQ(z.dim("q"), 1u);
  EXPECT_EQ(z.dim("p"), 1u);
  CostModel bad = CostModel::constant(3, 3, std::vector<double>(9, 1.5));
  EXPECT_THROW(build_Z_layer(bad, bp, 1, SitePosition::kInterior, {}),
               ConfigError);
  CostModel high = CostModel::constant(3, 3, std::vector<double>(9, 4.0));
  EXPECT_THROW(build_Z_layer(high, bp, 1, SitePosition::kInterior, {}),
               ConfigError);
}

CostModel memory_from_steps(const CostModel& c, std::size_t n, std::size_t t) {
  std::vector<double> mem(t * n * n);
  for (std::size_t s = 0; s < t; ++s) {
    for (std::size_t dest = 0; dest < n; ++dest) {
      for (std::size_t src = 0; src < n; ++src) {
        mem[(s * n + dest) * n + src] =
            c.step(s, static_cast<int>(src), static_cast<int>(dest));
      }
    }
  }
  return CostModel::memory_only(n, t, 1, mem);
}

TEST(SKLayer, DepthOneReducesToS) {
  std::mt19937_64 rng(9);
  const std::size_t n = 4;
  const CostModel c = CostModel::constant(n, n, random_matrix(rng, n, 1, 9));
  const CostModel m = memory_from_steps(c, n, n);
  EdgeBoundary eb;
  eb.out_node = 2;
  eb.out_step = 2;
  MemoryBoundary mb;
  mb.out_node = 2;
  for (SitePosition pos : {SitePosition::kInterior, SitePosition::kLast}) {
    const Tensor s = build_S_layer(c, 0.4, 2, pos, eb);
    const Tensor sk = build_SK_layer(m, 0.4, 1, 2, pos, mb)
                          .relabeled({{"k0", "k"}})
                          .relabeled(pos == SitePosition::kInterior
                                         ? std::vector<std::pair<std::string, std::string>>{{"l0", "l"}}
                                         : std::vector<std::pair<std::string, std::string>>{});
    EXPECT_LT(max_abs_difference(s, sk), 1e-15);
  }
}

TEST(SKLayer, AmplitudeMatchesMemoryCost) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    TourProblem p;
    p.variant = Variant::kNmtsp;
    p.n_nodes = 4;
    p.n_steps = 4;
    p.returning = false;
    p.memory_depth = 2;
    std::vector<double> mem(4 * 64);
    for (double& v : mem) v = testing::uniform_int(rng, 1, 9);
    p.costs = CostModel::memory_only(4, 4, 2, mem);
    const PreparedProblem prepared = prepare(p);
    const double tau = 0.25;
    const NetworkPlan plan = build_plan(prepared, PlanState{}, tau);
    for_each_assignment(4, 4, [&](const std::vector<int>& x) {
      const Real a = network_amplitude(plan, x);
      if (check_feasible(p, x).feasible) {
        EXPECT_NEAR(static_cast<double>(a), std::exp(-tau * *route_cost(p, x)),
                    1e-12);
      } else {
        EXPECT_EQ(a, 0);
      }
    });
  }
}

TEST(SKLayer, ZeroTauAndDepthChecks) {
  std::vector<double> mem(4 * 64, 3.0);
  const CostModel m = CostModel::memory_only(4, 4, 2, mem);
  const Tensor sk = build_SK_layer(m, 0.0, 2, 2, SitePosition::kInterior, {});
  for (Real v : sk.values()) EXPECT_EQ(v, 1);
  EXPECT_EQ(sk.count_nonzero(), 64u);
  const CostModel deep = CostModel::memory_only(2, 2, 1, std::vector<double>(8, 1));
  EXPECT_NO_THROW(build_SK_layer(deep, 0.0, 1, 1, SitePosition::kLast, {}));
  TourProblem p;
  p.variant = Variant::kNmtsp;
  p.n_nodes = 3;
  p.n_steps = 2;
  p.returning = false;
  p.memory_depth = 2;
  std::size_t size = 2 * 27;
  p.costs = CostModel::memory_only(3, 2, 2, std::vector<double>(size, 1.0));
  EXPECT_THROW(p.validate(), ModelError);
}

// Exhaustive check: the network amplitude of every free-site assignment is
// proportional to [feasible] * exp(-tau * objective).
void expect_boltzmann_network(const TourProblem& p, double tau) {
  const PreparedProblem prepared = prepare(p);
  std::size_t checked = 0;
  for (const std::optional<int>& anchor : end_anchors(p)) {
    PlanState state;
    if (p.fixed_start) state.prefix.push_back(*p.fixed_start);
    state.end_node = anchor;
    if (p.fixed_start && state.end_node && p.n_steps == 1) state.end_node.reset();
    NetworkPlan plan;
    try {
      plan = build_plan(prepared, state, tau);
    } catch (const NoSurvivingState& e) {
      ASSERT_TRUE(e.infeasible());
      continue;
    }
    // Exhaustive evaluation is only affordable on small free stretches.
    double work = 1;
    for (std::size_t s = 0; s < plan.sites.size(); ++s) work *= p.n_nodes;
    if (work > 5000) continue;
    const double sign = p.variant == Variant::kBtspMaxMin ? -1.0 : 1.0;
    std::optional<double> ratio;
    for_each_assignment(p.n_nodes, plan.sites.size(), [&](const std::vector<int>& x) {
      Route r = state.prefix;
      r.insert(r.end(), x.begin(), x.end());
      if (state.end_node) r.push_back(*state.end_node);
      const Real a = network_amplitude(plan, x);
      const auto cost = route_cost(p, r);
      if (!check_feasible(p, r).feasible || !cost) {
        ASSERT_EQ(a, 0) << to_string(p.variant);
        return;
      }
      ASSERT_GT(a, 0) << to_string(p.variant);
      const double r_here =
          std::log(static_cast<double>(a)) + sign * tau * *cost;
      if (!ratio) ratio = r_here;
      ASSERT_NEAR(r_here, *ratio, 1e-9) << to_string(p.variant);
    });
    if (++checked == 2) break;
  }
}

TEST(Network, AmplitudeIsFeasibilityTimesBoltzmannForEveryVariant) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 15; ++trial) {
    for (bool returning : {true, false}) {
      expect_boltzmann_network(testing::random_tsp(rng, 4, returning, 1, 20), 0.2);
    }
    TourProblem d = testing::random_dnsnn(rng);
    d.n_nodes = std::min<std::size_t>(d.n_nodes, 4);
    d.visit_bounds.resize(d.n_nodes);
    d.costs = CostModel::constant(d.n_nodes, d.n_steps,
                                  random_matrix(rng, d.n_nodes, 1, 9));
    try {
      d.validate();
      expect_boltzmann_network(d, 0.3);
    } catch (const NoSurvivingState&) {
      // Structurally infeasible bounds; nothing to compare.
    }
    expect_boltzmann_network(testing::random_btsp(rng, false), 0.5);
    expect_boltzmann_network(testing::random_btsp(rng, true), 0.5);
    TourProblem g = testing::random_ptsp(rng);
    expect_boltzmann_network(g, 0.1);
    TourProblem q = testing::random_tspp(rng);
    if (q.n_nodes <= 5) expect_boltzmann_network(q, 0.1);
    expect_boltzmann_network(testing::random_nmtsp(rng), 0.1);
  }
}

TEST(Network, LinearAndPinnedTermsEnterTheAmplitude) {
  std::mt19937_64 rng(13);
  for (bool returning : {true, false}) {
    TourProblem p = testing::random_tsp(rng, 4, returning, 1, 9);
    std::vector<double> linear(16);
    for (double& v : linear) v = testing::uniform_int(rng, 0, 5);
    p.costs.set_linear(linear);
    p.costs.forbid_node(2, 1);
    p.costs.pin(1, 0);
    expect_boltzmann_network(p, 0.3);
    TourProblem lin;
    lin.variant = Variant::kLinearOnly;
    lin.n_nodes = 3;
    lin.n_steps = 3;
    lin.returning = false;
    lin.costs = CostModel::linear_only(3, 3, std::vector<double>(
                                                 {1, 2, 3, 3, 1, 2, 2, 3, 1}));
    lin.visit_bounds = {{0, 1}, {0, 3}, {1, 2}};
    expect_boltzmann_network(lin, 0.5);
  }
}

TEST(Network, BondDimensionsFollowTheLayerKinds) {
  std::mt19937_64 rng(14);
  const TourProblem tsp = testing::random_tsp(rng, 5, true);
  const NetworkPlan a = build_plan(prepare(tsp), PlanState{{}, 4}, 1.0);
  ASSERT_FALSE(a.chains.empty());
  EXPECT_EQ(a.chains.front().id, "e");
  EXPECT_EQ(a.chains.front().bond_dims, std::vector<std::size_t>{5});
  for (std::size_t k = 1; k < a.chains.size(); ++k) {
    EXPECT_EQ(a.chains[k].bond_dims, std::vector<std::size_t>{2});
  }

  TourProblem b = make_tsp(4, random_matrix(rng, 4, 1, 7));
  b.variant = Variant::kBtspMinMax;
  const PreparedProblem pb = prepare(b);
  const NetworkPlan zb = build_plan(pb, PlanState{{}, 3}, 1.0);
  EXPECT_EQ(zb.chains.front().bond_dims,
            (std::vector<std::size_t>{4, static_cast<std::size_t>(pb.max_cost)}));

  TourProblem d;
  d.variant = Variant::kDnsnn;
  d.n_nodes = 3;
  d.n_steps = 5;
  d.returning = false;
  d.costs = CostModel::constant(3, 5, random_matrix(rng, 3, 1, 9));
  d.visit_bounds = {{1, 3}, {0, 2}, {2, 2}};
  const NetworkPlan db = build_plan(prepare(d), PlanState{}, 1.0);
  std::map<std::string, std::size_t> dims;
  for (const auto& c : db.chains) dims[c.id] = c.bond_dims.front();
  EXPECT_EQ(dims["n0"], 4u);
  EXPECT_EQ(dims["n1"], 3u);
  EXPECT_EQ(dims["n2"], 3u);

  const TourProblem m = testing::random_nmtsp(rng, 2);
  const NetworkPlan mb = build_plan(prepare(m), PlanState{}, 1.0);
  EXPECT_EQ(mb.chains.front().bond_dims,
            std::vector<std::size_t>(2, m.n_nodes));
}

TEST(Network, ChainOrderDoesNotChangeAmplitudes) {
  std::mt19937_64 rng(15);
  const TourProblem p = testing::random_tsp(rng, 5, true, 1, 30);
  NetworkPlan plan = build_plan(prepare(p), PlanState{{}, 4}, 0.2);
  const SweepResult base = sweep(plan);
  for (SitePlan& site : plan.sites) {
    std::reverse(site.layers.begin() + 1, site.layers.end());
  }
  const SweepResult reversed = sweep(plan);
  EXPECT_LT(max_abs_difference(base.unscaled_p(), reversed.unscaled_p()),
            1e-15L * base.unscaled_p().max_abs());
}

}  // namespace
}  // namespace tnroute
