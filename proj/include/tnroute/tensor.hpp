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

// Labeled real tensors with dense or coordinate-list storage.
//
// Data is laid out row-major with respect to the label order. Sparse tensors
// store (flat offset, value) pairs sorted by offset. Contraction pairs
// indexes by label; the result carries the unpaired labels of the first
// operand followed by the unpaired labels of the second.

#ifndef TNROUTE_TENSOR_HPP_
#define TNROUTE_TENSOR_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tnroute {

// Amplitudes e^{-tau C} span many orders of magnitude within one sweep; the
// extended exponent range of long double keeps them representable.
using Real = long double;

class ContractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every amplitude vanished: the instance is infeasible or tau underflowed.
class NoSurvivingState : public std::runtime_error {
 public:
  explicit NoSurvivingState(const std::string& what,
                            std::optional<std::size_t> iteration = {},
                            bool infeasible = false)
      : std::runtime_error(what), iteration_(iteration),
        infeasible_(infeasible) {}
  std::optional<std::size_t> iteration() const { return iteration_; }
  bool infeasible() const { return infeasible_; }

 private:
  std::optional<std::size_t> iteration_;
  bool infeasible_;
};

struct ContractionStats {
  std::uint64_t multiply_adds = 0;
};

class Tensor {
 public:
  enum class Storage { kDense, kSparse };

  // Rank-0 dense tensor holding zero.
  Tensor();

  static Tensor scalar(Real value);
  static Tensor zeros(std::vector<std::string> labels,
                      std::vector<std::size_t> dims);
  static Tensor dense(std::vector<std::string> labels,
                      std::vector<std::size_t> dims, std::vector<Real> data);
  // Entries are (row-major flat offset, value); duplicates are rejected.
  static Tensor sparse(std::vector<std::string> labels,
                       std::vector<std::size_t> dims,
                       std::vector<std::pair<std::size_t, Real>> entries);

  std::size_t rank() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  Storage storage() const { return storage_; }
  bool is_sparse() const { return storage_ == Storage::kSparse; }

  // Number of elements of the dense shape.
  std::size_t size() const { return size_; }
  // Stored entries: size() for dense, entry count for sparse.
  std::size_t stored() const;
  // Entries that are exactly nonzero.
  std::size_t count_nonzero() const;

  bool has_label(std::string_view label) const;
  std::size_t axis(std::string_view label) const;
  std::size_t dim(std::string_view label) const { return dims_[axis(label)]; }

  Real at(std::span<const std::size_t> coords) const;
  Real at(std::initializer_list<std::size_t> coords) const {
    return at(std::span<const std::size_t>(coords.begin(), coords.size()));
  }

  // Dense payload; throws for sparse tensors.
  const std::vector<Real>& data() const;
  std::vector<Real>& mutable_data();
  const std::vector<std::size_t>& offsets() const { return offsets_; }
  const std::vector<Real>& values() const { return values_; }

  Tensor to_dense() const;
  // Keeps only entries that are exactly nonzero.
  Tensor to_sparse() const;

  // Reorders axes so that labels() == order.
  Tensor permuted(const std::vector<std::string>& order) const;
  Tensor relabeled(
      const std::vector<std::pair<std::string, std::string>>& renames) const;
  // Fixes `label` to `index` and drops the axis.
  Tensor sliced(std::string_view label, std::size_t index) const;
  // Keeps indices [begin, begin + count) of `label`, renumbered from 0.
  Tensor narrowed(std::string_view label, std::size_t begin,
                  std::size_t count) const;

  Tensor scaled(Real factor) const;
  void scale_in_place(Real factor);
  Real max_value() const;
  Real max_abs() const;
  Real frobenius_norm() const;

 private:
  void check_invariants() const;

  std::vector<std::string> labels_;
  std::vector<std::size_t> dims_;
  std::size_t size_ = 1;
  Storage storage_ = Storage::kDense;
  std::vector<Real> data_;
  std::vector<std::size_t> offsets_;
  std::vector<Real> values_;
};

// Pairs of (label in a, label in b) summed over by contract().
struct IndexPairing {
  std::vector<std::pair<std::string, std::string>> pairs;

  IndexPairing() = default;
  IndexPairing(std::initializer_list<std::pair<std::string, std::string>> p)
      : pairs(p) {}
  void add(std::string a, std::string b) {
    pairs.emplace_back(std::move(a), std::move(b));
  }
};

// Sums over the paired indexes. Sparse operands only visit stored entries.
// Dense x dense and sparse x dense give dense results; sparse x sparse gives
// a sparse result.
Tensor contract(const Tensor& a, const Tensor& b, const IndexPairing& pairing,
                ContractionStats* stats = nullptr);

// Sums `label` out.
Tensor trace_index(const Tensor& a, std::string_view label);

// Elementwise maximum of |a - b| after aligning b's labels to a's.
Real max_abs_difference(const Tensor& a, const Tensor& b);

struct ArgmaxResult {
  std::size_t index = 0;
  std::size_t tie_count = 0;
  std::vector<std::size_t> candidates;
};

// Uniform random pick among entries within rel_tol of the maximum. Entries
// must be nonnegative; an all-zero vector raises NoSurvivingState.
ArgmaxResult argmax_with_ties(const Tensor& v, double rel_tol,
                              std::mt19937_64& rng);
ArgmaxResult argmax_with_ties(const Tensor& v, double rel_tol,
                              std::uint64_t seed);

}  // namespace tnroute

#endif  // TNROUTE_TENSOR_HPP_
