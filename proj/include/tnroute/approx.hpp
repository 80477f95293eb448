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

// Approximate solving: constraint-layer subsets and MPS compression of
// intermediate tensors.

#ifndef TNROUTE_APPROX_HPP_
#define TNROUTE_APPROX_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnroute/tensor.hpp"

namespace tnroute {

enum class ApproxStrategy { kAll, kRandomK, kNearest, kFromFailures };

std::string_view to_string(ApproxStrategy s);

struct ApproxConfig {
  ApproxStrategy strategy = ApproxStrategy::kAll;
  // Layers per iteration; ceil(n_nodes / 4) when unset.
  std::optional<std::size_t> k;
  // Bond cap for compressing intermediate tensors; exact when unset.
  std::optional<std::size_t> mps_bond;
  std::uint64_t seed = 0;
  // Re-solves allowed by the failure-driven strategy.
  std::size_t max_failure_rounds = 3;

  bool exact() const { return strategy == ApproxStrategy::kAll && !mps_bond; }
};

// Parses "all", "random:k", "nearest:k" or "failures:k".
ApproxConfig parse_approx(std::string_view text);

// A constraint chain that may be switched on. Lower closeness = nearer.
struct LayerCandidate {
  int key = 0;
  double closeness = 0.0;
};

struct SelectionHistory {
  std::vector<int> failed_keys;  // keys violated by a previous attempt
};

// Keys of the chains to activate, sorted ascending.
std::vector<int> select_layers(std::span<const LayerCandidate> candidates,
                               const SelectionHistory& history,
                               const ApproxConfig& config,
                               std::size_t default_k, std::mt19937_64& rng);

// Open-boundary matrix product state. Site s has labels
// (left bond, physical, right bond) with edge bonds of dimension 1.
class MPSChain {
 public:
  MPSChain() = default;
  MPSChain(std::vector<Tensor> sites, std::vector<std::string> physical,
           std::vector<double> bond_errors);

  std::size_t size() const { return sites_.size(); }
  const std::vector<Tensor>& sites() const { return sites_; }
  const std::vector<std::string>& physical_labels() const { return physical_; }
  std::vector<std::size_t> bond_dims() const;
  // Frobenius norm of the discarded singular values, per cut.
  const std::vector<double>& bond_errors() const { return bond_errors_; }
  double truncation_error() const;

  // Contracts the chain back into a dense tensor over the physical labels.
  Tensor to_tensor() const;

 private:
  std::vector<Tensor> sites_;
  std::vector<std::string> physical_;
  std::vector<double> bond_errors_;
};

// Sequential SVD factorization of `w` keeping at most chi singular values
// per cut, with sites in the label order of `w`.
MPSChain mps_truncate(const Tensor& w, std::size_t chi);

}  // namespace tnroute

#endif  // TNROUTE_APPROX_HPP_
