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

#include "tnroute/approx.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>

#include "tnroute/layers.hpp"

namespace tnroute {

std::string_view to_string(ApproxStrategy s) {
  switch (s) {
    case ApproxStrategy::kAll:
      return "all";
    case ApproxStrategy::kRandomK:
      return "random";
    case ApproxStrategy::kNearest:
      return "nearest";
    case ApproxStrategy::kFromFailures:
      return "failures";
  }
  return "?";
}

ApproxConfig parse_approx(std::string_view text) {
  ApproxConfig config;
  if (text == "all") return config;
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("approx mode must be all, random:k, nearest:k or "
                      "failures:k");
  }
  const std::string_view name = text.substr(0, colon);
  const std::string_view number = text.substr(colon + 1);
  if (name == "random") {
    config.strategy = ApproxStrategy::kRandomK;
  } else if (name == "nearest") {
    config.strategy = ApproxStrategy::kNearest;
  } else if (name == "failures") {
    config.strategy = ApproxStrategy::kFromFailures;
  } else {
    throw ConfigError("unknown approx strategy '" + std::string(name) + "'");
  }
  std::size_t k = 0;
  const auto [ptr, ec] =
      std::from_chars(number.data(), number.data() + number.size(), k);
  if (ec != std::errc() || ptr != number.data() + number.size()) {
    throw ConfigError("approx layer count must be a nonnegative integer");
  }
  config.k = k;
  return config;
}

std::vector<int> select_layers(std::span<const LayerCandidate> candidates,
                               const SelectionHistory& history,
                               const ApproxConfig& config,
                               std::size_t default_k, std::mt19937_64& rng) {
  std::vector<int> keys;
  for (const auto& c : candidates) keys.push_back(c.key);
  const std::size_t k = config.k.value_or(default_k);
  if (config.strategy == ApproxStrategy::kAll || k >= keys.size()) {
    std::sort(keys.begin(), keys.end());
    return keys;
  }

  std::vector<LayerCandidate> by_distance(candidates.begin(), candidates.end());
  std::stable_sort(by_distance.begin(), by_distance.end(),
                   [](const LayerCandidate& a, const LayerCandidate& b) {
                     if (a.closeness != b.closeness) {
                       return a.closeness < b.closeness;
                     }
                     return a.key < b.key;
                   });

  std::vector<int> chosen;
  switch (config.strategy) {
    case ApproxStrategy::kRandomK:
      std::sample(keys.begin(), keys.end(), std::back_inserter(chosen), k, rng);
      break;
    case ApproxStrategy::kNearest:
      for (std::size_t i = 0; i < k; ++i) chosen.push_back(by_distance[i].key);
      break;
    case ApproxStrategy::kFromFailures: {
      for (int key : keys) {
        if (std::find(history.failed_keys.begin(), history.failed_keys.end(),
                      key) != history.failed_keys.end()) {
          chosen.push_back(key);
        }
      }
      for (const auto& c : by_distance) {
        if (chosen.size() >= k) break;
        if (std::find(chosen.begin(), chosen.end(), c.key) == chosen.end()) {
          chosen.push_back(c.key);
        }
      }
      break;
    }
    case ApproxStrategy::kAll:
      break;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// ---------------------------------------------------------------------------
// MPS

namespace {

std::string mps_bond(std::size_t b) { return "_b" + std::to_string(b); }

}  // namespace

MPSChain::MPSChain(std::vector<Tensor> sites, std::vector<std::string> physical,
                   std::vector<double> bond_errors)
    : sites_(std::move(sites)),
      physical_(std::move(physical)),
      bond_errors_(std::move(bond_errors)) {}

std::vector<std::size_t> MPSChain::bond_dims() const {
  std::vector<std::size_t> dims;
  for (std::size_t s = 0; s + 1 < sites_.size(); ++s) {
    dims.push_back(sites_[s].dims()[2]);
  }
  return dims;
}

double MPSChain::truncation_error() const {
  double s = 0;
  for (double e : bond_errors_) s += e * e;
  return std::sqrt(s);
}

Tensor MPSChain::to_tensor() const {
  if (sites_.empty()) return Tensor::scalar(1);
  Tensor acc = sites_.front();
  for (std::size_t s = 1; s < sites_.size(); ++s) {
    acc = contract(acc, sites_[s], {{mps_bond(s), mps_bond(s)}});
  }
  acc = acc.sliced(mps_bond(0), 0).sliced(mps_bond(sites_.size()), 0);
  return acc.permuted(physical_);
}

MPSChain mps_truncate(const Tensor& w, std::size_t chi) {
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>;
  if (chi < 1) throw ConfigError("MPS bond cap must be >= 1");
  const Tensor dense = w.to_dense();
  const std::size_t r = dense.rank();
  if (r == 0) return MPSChain({}, {}, {});

  std::vector<Tensor> sites;
  std::vector<double> errors;
  std::size_t left = 1;
  std::size_t remaining = dense.size();
  Matrix rest = Eigen::Map<const Matrix>(dense.data().data(), 1,
                                         static_cast<Eigen::Index>(remaining));

  for (std::size_t s = 0; s + 1 < r; ++s) {
    const std::size_t d = dense.dims()[s];
    remaining /= d;
    // Row-major reshape of (left, d * remaining) into (left * d, remaining).
    Matrix m = Eigen::Map<const Matrix>(rest.data(),
                                        static_cast<Eigen::Index>(left * d),
                                        static_cast<Eigen::Index>(remaining));
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const auto full = static_cast<std::size_t>(sigma.size());
    const std::size_t keep = std::min(chi, full);
    Real dropped = 0;
    for (std::size_t k = keep; k < full; ++k) {
      dropped += sigma(static_cast<Eigen::Index>(k)) *
                 sigma(static_cast<Eigen::Index>(k));
    }
    errors.push_back(static_cast<double>(std::sqrt(dropped)));

    const auto kk = static_cast<Eigen::Index>(keep);
    Matrix u = svd.matrixU().leftCols(kk);
    std::vector<Real> data(u.data(), u.data() + u.size());
    sites.push_back(Tensor::dense({mps_bond(s), dense.labels()[s],
                                   mps_bond(s + 1)},
                                  {left, d, keep}, std::move(data)));
    rest = sigma.head(kk).asDiagonal() * svd.matrixV().leftCols(kk).transpose();
    left = keep;
  }
  const std::size_t d_last = dense.dims()[r - 1];
  Matrix last = rest;
  std::vector<Real> data(last.data(), last.data() + last.size());
  sites.push_back(Tensor::dense({mps_bond(r - 1), dense.labels()[r - 1],
                                 mps_bond(r)},
                                {left, d_last, 1}, std::move(data)));
  return MPSChain(std::move(sites), dense.labels(), std::move(errors));
}

}  // namespace tnroute
