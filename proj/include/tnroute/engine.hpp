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

// Right-to-left contraction of a network plan and the iterative solver that
// fixes one route step per iteration.

#ifndef TNROUTE_ENGINE_HPP_
#define TNROUTE_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tnroute/approx.hpp"
#include "tnroute/layers.hpp"
#include "tnroute/problem.hpp"
#include "tnroute/tensor.hpp"

namespace tnroute {

// Largest tau * (objective range) the solver accepts; keeps every amplitude
// ratio inside the long double exponent range.
inline constexpr double kMaxExponent = 11000.0;

struct SolverConfig {
  std::optional<double> tau;  // automatic when unset
  std::uint64_t seed = 0;
  bool reuse = false;
  std::size_t max_tau_retries = 6;
  double tie_rel_tol = 1e-12;
  ApproxConfig approx;
};

struct SweepOptions {
  bool keep_cache = false;
  std::optional<std::size_t> mps_bond;
};

struct SweepResult {
  Tensor p;                // rank 1, label "p"; scaled by 2^-log2_scale
  long log2_scale = 0;
  // env[s] holds the contraction of sites s..n-1 (s >= 1); env[n] = 1.
  std::vector<Tensor> env;
  ContractionStats stats;
  std::size_t peak_w_elements = 0;
  std::size_t peak_w_nonzeros = 0;
  double truncation_error = 0.0;

  // p * 2^log2_scale.
  Tensor unscaled_p() const;
};

// Contracts one site's stack with the environment `w` of the sites to its
// right. Interior and last sites trace the physical index; first and lone
// sites return the amplitude vector over "p".
Tensor absorb_site(const SitePlan& site, const Tensor& w,
                   ContractionStats* stats = nullptr);

SweepResult sweep(const NetworkPlan& plan, const SweepOptions& options = {});

// Environments of a full sweep (SweepOptions::keep_cache) over `frame`.
struct CachedSweep {
  PlanFrame frame;
  Real tau = 0;
  std::vector<Tensor> env;
};

// Amplitude vector of the first free step of `state` from cached
// environments; `state` must extend the cached frame's prefix by at least
// one step. Equal to a fresh sweep up to a positive factor.
Tensor cached_amplitudes(const PreparedProblem& prepared,
                         const CachedSweep& cache, const PlanState& state,
                         ContractionStats* stats = nullptr);

// Amplitude of one basis state (one node per site), without rescaling.
Real network_amplitude(const NetworkPlan& plan,
                       std::span<const int> assignment);

// Nodes tried as the fixed last step of a returning route without fixed
// endpoints; {nullopt} when no anchor is needed.
std::vector<std::optional<int>> end_anchors(const TourProblem& problem);

double auto_tau(const TourProblem& problem, const SolverConfig& config = {});

// Throws NoSurvivingState when no feasible route survives (infeasible) or
// when a fixed tau underflows every amplitude.
Solution solve(const TourProblem& problem, const SolverConfig& config = {});
Solution solve_with_reuse(const TourProblem& problem,
                          SolverConfig config = {});

}  // namespace tnroute

#endif  // TNROUTE_ENGINE_HPP_
