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


// Helpers that assemble small networks by hand and evaluate them by
// enumeration.

#ifndef TNROUTE_TESTS_NETWORKS_HPP_
#define TNROUTE_TESTS_NETWORKS_HPP_

#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "tnroute/engine.hpp"
#include "tnroute/layers.hpp"

namespace tnroute::testing {

// Entry of `t` addressed by label.
inline Real entry(const Tensor& t,
                  std::initializer_list<std::pair<const char*, std::size_t>> c) {
  std::vector<std::size_t> coords(t.rank(), 0);
  for (const auto& [label, value] : c) coords[t.axis(label)] = value;
  return t.at(coords);
}

struct ChainBuilder {
  std::string id;
  LayerKind kind = LayerKind::kF;
  std::function<Tensor(SitePosition)> build;
};

// Plan over n_sites sites with every node allowed and only filter chains.
inline NetworkPlan filter_plan(std::size_t n_nodes, std::size_t n_sites,
                               const std::vector<ChainBuilder>& chains) {
  NetworkPlan plan;
  plan.n_nodes = n_nodes;
  std::vector<int> all(n_nodes);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t s = 0; s < n_sites; ++s) {
    SitePlan site;
    site.step = s;
    site.position = site_position(s, n_sites);
    site.allowed = all;
    site.plus = build_plus(all, n_nodes);
    for (const ChainBuilder& c : chains) {
      LayerTensor lt;
      lt.spec.kind = c.kind;
      lt.spec.chain = c.id;
      lt.tensor = c.build(site.position);
      lt.in_bonds = in_bond_labels(c.kind, site.position);
      lt.out_bonds = out_bond_labels(c.kind, site.position);
      site.layers.push_back(std::move(lt));
    }
    plan.sites.push_back(std::move(site));
  }
  return plan;
}

// Calls f(assignment) for all n_nodes^n_sites assignments.
inline void for_each_assignment(
    std::size_t n_nodes, std::size_t n_sites,
    const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> x(n_sites, 0);
  while (true) {
    f(x);
    std::size_t k = n_sites;
    while (k > 0) {
      --k;
      if (++x[k] < static_cast<int>(n_nodes)) break;
      x[k] = 0;
      if (k == 0) return;
    }
    if (n_sites == 0) return;
  }
}

// Assignments with a nonzero amplitude; every amplitude must be 0 or 1.
inline std::vector<std::vector<int>> survivors(const NetworkPlan& plan,
                                               bool* binary = nullptr) {
  std::vector<std::vector<int>> out;
  if (binary) *binary = true;
  for_each_assignment(plan.n_nodes, plan.sites.size(),
                      [&](const std::vector<int>& x) {
                        const Real a = network_amplitude(plan, x);
                        if (binary && a != 0 && a != 1) *binary = false;
                        if (a != 0) out.push_back(x);
                      });
  return out;
}

}  // namespace tnroute::testing

#endif  // TNROUTE_TESTS_NETWORKS_HPP_
