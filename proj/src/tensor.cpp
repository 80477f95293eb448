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

#include "tnroute/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace tnroute {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

std::vector<std::size_t> row_major_strides(
    const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) {
    strides[k - 1] = strides[k] * dims[k];
  }
  return strides;
}

// Maps a flat offset of the source layout onto (row, col) of a matricized
// view in which `row_axes` and `col_axes` are each laid out row-major.
class Matricizer {
 public:
  Matricizer(const std::vector<std::size_t>& dims,
             const std::vector<std::size_t>& row_axes,
             const std::vector<std::size_t>& col_axes)
      : dims_(dims), src_strides_(row_major_strides(dims)),
        row_mul_(dims.size(), 0), col_mul_(dims.size(), 0) {
    std::size_t m = 1;
    for (std::size_t k = row_axes.size(); k-- > 0;) {
      row_mul_[row_axes[k]] = m;
      m *= dims[row_axes[k]];
    }
    rows_ = m;
    m = 1;
    for (std::size_t k = col_axes.size(); k-- > 0;) {
      col_mul_[col_axes[k]] = m;
      m *= dims[col_axes[k]];
    }
    cols_ = m;
  }

  std::pair<std::size_t, std::size_t> map(std::size_t offset) const {
    std::size_t row = 0;
    std::size_t col = 0;
    for (std::size_t ax = 0; ax < dims_.size(); ++ax) {
      const std::size_t c = (offset / src_strides_[ax]) % dims_[ax];
      row += c * row_mul_[ax];
      col += c * col_mul_[ax];
    }
    return {row, col};
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> src_strides_;
  std::vector<std::size_t> row_mul_;
  std::vector<std::size_t> col_mul_;
  std::size_t rows_ = 1;
  std::size_t cols_ = 1;
};

// Dense (rows x cols) matrix view of a dense tensor.
std::vector<Real> matricize(const Tensor& t,
                            const std::vector<std::size_t>& row_axes,
                            const std::vector<std::size_t>& col_axes) {
  std::vector<std::string> order;
  for (std::size_t ax : row_axes) order.push_back(t.labels()[ax]);
  for (std::size_t ax : col_axes) order.push_back(t.labels()[ax]);
  return t.permuted(order).data();
}

}  // namespace

// ---------------------------------------------------------------------------
// Tensor

Tensor::Tensor() : data_(1, Real{0}) {}

Tensor Tensor::scalar(Real value) {
  Tensor t;
  t.data_[0] = value;
  return t;
}

Tensor Tensor::zeros(std::vector<std::string> labels,
                     std::vector<std::size_t> dims) {
  const std::size_t n = product(dims);
  return dense(std::move(labels), std::move(dims), std::vector<Real>(n));
}

Tensor Tensor::dense(std::vector<std::string> labels,
                     std::vector<std::size_t> dims, std::vector<Real> data) {
  Tensor t;
  t.labels_ = std::move(labels);
  t.dims_ = std::move(dims);
  t.size_ = product(t.dims_);
  t.storage_ = Storage::kDense;
  t.data_ = std::move(data);
  t.check_invariants();
  return t;
}

Tensor Tensor::sparse(std::vector<std::string> labels,
                      std::vector<std::size_t> dims,
                      std::vector<std::pair<std::size_t, Real>> entries) {
  Tensor t;
  t.labels_ = std::move(labels);
  t.dims_ = std::move(dims);
  t.size_ = product(t.dims_);
  t.storage_ = Storage::kSparse;
  t.data_.clear();
  std::sort(entries.begin(), entries.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  t.offsets_.reserve(entries.size());
  t.values_.reserve(entries.size());
  for (const auto& [off, v] : entries) {
    t.offsets_.push_back(off);
    t.values_.push_back(v);
  }
  t.check_invariants();
  return t;
}

void Tensor::check_invariants() const {
  if (labels_.size() != dims_.size()) {
    throw ContractionError("label count differs from dimension count");
  }
  for (std::size_t a = 0; a < labels_.size(); ++a) {
    if (dims_[a] == 0) throw ContractionError("zero-sized index " + labels_[a]);
    for (std::size_t b = a + 1; b < labels_.size(); ++b) {
      if (labels_[a] == labels_[b]) {
        throw ContractionError("duplicate label " + labels_[a]);
      }
    }
  }
  if (storage_ == Storage::kDense) {
    if (data_.size() != size_) {
      throw ContractionError("dense data length differs from dims product");
    }
    return;
  }
  for (std::size_t k = 0; k < offsets_.size(); ++k) {
    if (offsets_[k] >= size_) {
      throw ContractionError("sparse coordinate out of range");
    }
    if (k > 0 && offsets_[k] == offsets_[k - 1]) {
      throw ContractionError("duplicate sparse coordinate");
    }
  }
}

std::size_t Tensor::stored() const {
  return is_sparse() ? values_.size() : data_.size();
}

std::size_t Tensor::count_nonzero() const {
  const auto& v = is_sparse() ? values_ : data_;
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](Real x) { return x != 0; }));
}

bool Tensor::has_label(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t Tensor::axis(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw ContractionError("unknown label '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

Real Tensor::at(std::span<const std::size_t> coords) const {
  if (coords.size() != rank()) throw ContractionError("coordinate rank");
  std::size_t off = 0;
  for (std::size_t a = 0; a < coords.size(); ++a) {
    if (coords[a] >= dims_[a]) throw ContractionError("coordinate range");
    off = off * dims_[a] + coords[a];
  }
  if (!is_sparse()) return data_[off];
  const auto it = std::lower_bound(offsets_.begin(), offsets_.end(), off);
  if (it == offsets_.end() || *it != off) return Real{0};
  return values_[static_cast<std::size_t>(it - offsets_.begin())];
}

const std::vector<Real>& Tensor::data() const {
  if (is_sparse()) throw ContractionError("data() on a sparse tensor");
  return data_;
}

std::vector<Real>& Tensor::mutable_data() {
  if (is_sparse()) throw ContractionError("data() on a sparse tensor");
  return data_;
}

Tensor Tensor::to_dense() const {
  if (!is_sparse()) return *this;
  std::vector<Real> data(size_);
  for (std::size_t k = 0; k < offsets_.size(); ++k) {
    data[offsets_[k]] = values_[k];
  }
  return dense(labels_, dims_, std::move(data));
}

Tensor Tensor::to_sparse() const {
  std::vector<std::pair<std::size_t, Real>> entries;
  if (is_sparse()) {
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
      if (values_[k] != 0) entries.emplace_back(offsets_[k], values_[k]);
    }
  } else {
    for (std::size_t k = 0; k < data_.size(); ++k) {
      if (data_[k] != 0) entries.emplace_back(k, data_[k]);
    }
  }
  return sparse(labels_, dims_, std::move(entries));
}

Tensor Tensor::permuted(const std::vector<std::string>& order) const {
  if (order.size() != rank()) throw ContractionError("permutation rank");
  std::vector<std::size_t> src_axes;
  src_axes.reserve(order.size());
  for (const auto& label : order) src_axes.push_back(axis(label));
  if (order == labels_) return *this;

  std::vector<std::size_t> new_dims;
  for (std::size_t ax : src_axes) new_dims.push_back(dims_[ax]);

  if (is_sparse()) {
    const Matricizer m(dims_, src_axes, {});
    std::vector<std::pair<std::size_t, Real>> entries;
    entries.reserve(offsets_.size());
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
      entries.emplace_back(m.map(offsets_[k]).first, values_[k]);
    }
    return sparse(order, std::move(new_dims), std::move(entries));
  }

  // Walk the destination in order with an odometer over source strides.
  const auto src_strides = row_major_strides(dims_);
  std::vector<std::size_t> step(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    step[k] = src_strides[src_axes[k]];
  }
  std::vector<Real> out(size_);
  std::vector<std::size_t> idx(order.size(), 0);
  std::size_t src = 0;
  for (std::size_t dst = 0; dst < size_; ++dst) {
    out[dst] = data_[src];
    for (std::size_t k = order.size(); k-- > 0;) {
      if (++idx[k] < new_dims[k]) {
        src += step[k];
        break;
      }
      src -= step[k] * (new_dims[k] - 1);
      idx[k] = 0;
    }
  }
  return dense(order, std::move(new_dims), std::move(out));
}

Tensor Tensor::relabeled(
    const std::vector<std::pair<std::string, std::string>>& renames) const {
  Tensor t = *this;
  for (const auto& [from, to] : renames) {
    t.labels_[axis(from)] = to;
  }
  t.check_invariants();
  return t;
}

Tensor Tensor::sliced(std::string_view label, std::size_t index) const {
  const std::size_t ax = axis(label);
  if (index >= dims_[ax]) throw ContractionError("slice index out of range");
  std::vector<std::string> labels = labels_;
  std::vector<std::size_t> dims = dims_;
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(ax));
  dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(ax));
  const auto strides = row_major_strides(dims_);
  const std::size_t outer = size_ / (strides[ax] * dims_[ax]);
  const std::size_t inner = strides[ax];

  if (is_sparse()) {
    std::vector<std::pair<std::size_t, Real>> entries;
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
      const std::size_t off = offsets_[k];
      const std::size_t c = (off / inner) % dims_[ax];
      if (c != index) continue;
      const std::size_t o = off / (inner * dims_[ax]);
      entries.emplace_back(o * inner + off % inner, values_[k]);
    }
    return sparse(std::move(labels), std::move(dims), std::move(entries));
  }
  std::vector<Real> out;
  out.reserve(outer * inner);
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = (o * dims_[ax] + index) * inner;
    out.insert(out.end(), data_.begin() + static_cast<std::ptrdiff_t>(base),
               data_.begin() + static_cast<std::ptrdiff_t>(base + inner));
  }
  return dense(std::move(labels), std::move(dims), std::move(out));
}

Tensor Tensor::narrowed(std::string_view label, std::size_t begin,
                        std::size_t count) const {
  const std::size_t ax = axis(label);
  if (count == 0 || begin + count > dims_[ax]) {
    throw ContractionError("narrowed range out of bounds");
  }
  std::vector<std::size_t> dims = dims_;
  dims[ax] = count;
  const auto strides = row_major_strides(dims_);
  const std::size_t inner = strides[ax];
  const std::size_t outer = size_ / (inner * dims_[ax]);

  if (is_sparse()) {
    std::vector<std::pair<std::size_t, Real>> entries;
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
      const std::size_t off = offsets_[k];
      const std::size_t c = (off / inner) % dims_[ax];
      if (c < begin || c >= begin + count) continue;
      const std::size_t o = off / (inner * dims_[ax]);
      entries.emplace_back((o * count + c - begin) * inner + off % inner,
                           values_[k]);
    }
    return sparse(labels_, std::move(dims), std::move(entries));
  }
  std::vector<Real> out;
  out.reserve(outer * count * inner);
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = (o * dims_[ax] + begin) * inner;
    out.insert(out.end(), data_.begin() + static_cast<std::ptrdiff_t>(base),
               data_.begin() + static_cast<std::ptrdiff_t>(base + count * inner));
  }
  return dense(labels_, std::move(dims), std::move(out));
}

Tensor Tensor::scaled(Real factor) const {
  Tensor t = *this;
  t.scale_in_place(factor);
  return t;
}

void Tensor::scale_in_place(Real factor) {
  for (Real& v : is_sparse() ? values_ : data_) v *= factor;
}

Real Tensor::max_value() const {
  const auto& v = is_sparse() ? values_ : data_;
  Real best = is_sparse() && values_.size() < size_ ? Real{0} : v.empty()
                                                                  ? Real{0}
                                                                  : v[0];
  for (Real x : v) best = std::max(best, x);
  return best;
}

Real Tensor::max_abs() const {
  Real best = 0;
  for (Real x : is_sparse() ? values_ : data_) best = std::max(best, std::fabs(x));
  return best;
}

Real Tensor::frobenius_norm() const {
  Real s = 0;
  for (Real x : is_sparse() ? values_ : data_) s += x * x;
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Contraction

Tensor contract(const Tensor& a, const Tensor& b, const IndexPairing& pairing,
                ContractionStats* stats) {
  std::vector<std::size_t> paired_a;
  std::vector<std::size_t> paired_b;
  for (const auto& [la, lb] : pairing.pairs) {
    if (!a.has_label(la) || !b.has_label(lb)) {
      throw ContractionError("pairing names unknown label " +
                             (a.has_label(la) ? lb : la));
    }
    const std::size_t xa = a.axis(la);
    const std::size_t xb = b.axis(lb);
    if (a.dims()[xa] != b.dims()[xb]) {
      throw ContractionError("dimension mismatch pairing " + la + " with " +
                             lb);
    }
    if (std::find(paired_a.begin(), paired_a.end(), xa) != paired_a.end() ||
        std::find(paired_b.begin(), paired_b.end(), xb) != paired_b.end()) {
      throw ContractionError("label paired twice");
    }
    paired_a.push_back(xa);
    paired_b.push_back(xb);
  }

  std::vector<std::size_t> free_a;
  std::vector<std::size_t> free_b;
  std::vector<std::string> labels;
  std::vector<std::size_t> dims;
  for (std::size_t ax = 0; ax < a.rank(); ++ax) {
    if (std::find(paired_a.begin(), paired_a.end(), ax) == paired_a.end()) {
      free_a.push_back(ax);
      labels.push_back(a.labels()[ax]);
      dims.push_back(a.dims()[ax]);
    }
  }
  for (std::size_t ax = 0; ax < b.rank(); ++ax) {
    if (std::find(paired_b.begin(), paired_b.end(), ax) == paired_b.end()) {
      free_b.push_back(ax);
      if (std::find(labels.begin(), labels.end(), b.labels()[ax]) !=
          labels.end()) {
        throw ContractionError("result would repeat label " + b.labels()[ax]);
      }
      labels.push_back(b.labels()[ax]);
      dims.push_back(b.dims()[ax]);
    }
  }

  const Matricizer ma(a.dims(), free_a, paired_a);
  const Matricizer mb(b.dims(), paired_b, free_b);
  const std::size_t rows = ma.rows();
  const std::size_t inner = ma.cols();
  const std::size_t cols = mb.cols();
  std::uint64_t madds = 0;

  if (a.is_sparse() && b.is_sparse()) {
    std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, Real>>>
        by_inner;
    for (std::size_t k = 0; k < b.offsets().size(); ++k) {
      const auto [in, col] = mb.map(b.offsets()[k]);
      by_inner[in].emplace_back(col, b.values()[k]);
    }
    std::unordered_map<std::size_t, Real> acc;
    for (std::size_t k = 0; k < a.offsets().size(); ++k) {
      const auto [row, in] = ma.map(a.offsets()[k]);
      const auto it = by_inner.find(in);
      if (it == by_inner.end()) continue;
      const Real av = a.values()[k];
      for (const auto& [col, bv] : it->second) {
        acc[row * cols + col] += av * bv;
        ++madds;
      }
    }
    std::vector<std::pair<std::size_t, Real>> entries;
    entries.reserve(acc.size());
    for (const auto& [off, v] : acc) {
      if (v != 0) entries.emplace_back(off, v);
    }
    if (stats) stats->multiply_adds += madds;
    return Tensor::sparse(std::move(labels), std::move(dims),
                          std::move(entries));
  }

  std::vector<Real> out(rows * cols);
  if (a.is_sparse()) {
    const std::vector<Real> bm = matricize(b, paired_b, free_b);
    for (std::size_t k = 0; k < a.offsets().size(); ++k) {
      const Real av = a.values()[k];
      if (av == 0) continue;
      const auto [row, in] = ma.map(a.offsets()[k]);
      Real* dst = out.data() + row * cols;
      const Real* src = bm.data() + in * cols;
      for (std::size_t c = 0; c < cols; ++c) dst[c] += av * src[c];
      madds += cols;
    }
  } else if (b.is_sparse()) {
    const std::vector<Real> am = matricize(a, free_a, paired_a);
    for (std::size_t k = 0; k < b.offsets().size(); ++k) {
      const Real bv = b.values()[k];
      if (bv == 0) continue;
      const auto [in, col] = mb.map(b.offsets()[k]);
      for (std::size_t r = 0; r < rows; ++r) {
        out[r * cols + col] += am[r * inner + in] * bv;
      }
      madds += rows;
    }
  } else {
    const std::vector<Real> am = matricize(a, free_a, paired_a);
    const std::vector<Real> bm = matricize(b, paired_b, free_b);
    for (std::size_t r = 0; r < rows; ++r) {
      Real* dst = out.data() + r * cols;
      for (std::size_t in = 0; in < inner; ++in) {
        const Real av = am[r * inner + in];
        if (av == 0) continue;
        const Real* src = bm.data() + in * cols;
        for (std::size_t c = 0; c < cols; ++c) dst[c] += av * src[c];
        madds += cols;
      }
    }
  }
  if (stats) stats->multiply_adds += madds;
  return Tensor::dense(std::move(labels), std::move(dims), std::move(out));
}

Tensor trace_index(const Tensor& a, std::string_view label) {
  const std::size_t ax = a.axis(label);
  std::vector<std::string> labels = a.labels();
  std::vector<std::size_t> dims = a.dims();
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(ax));
  dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(ax));
  const std::size_t d = a.dims()[ax];
  const std::size_t inner = row_major_strides(a.dims())[ax];

  if (a.is_sparse()) {
    std::unordered_map<std::size_t, Real> acc;
    for (std::size_t k = 0; k < a.offsets().size(); ++k) {
      const std::size_t off = a.offsets()[k];
      acc[(off / (inner * d)) * inner + off % inner] += a.values()[k];
    }
    std::vector<std::pair<std::size_t, Real>> entries(acc.begin(), acc.end());
    return Tensor::sparse(std::move(labels), std::move(dims),
                          std::move(entries));
  }
  const std::size_t outer = a.size() / (inner * d);
  std::vector<Real> out(outer * inner);
  const auto& src = a.data();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t base = (o * d + c) * inner;
      for (std::size_t i = 0; i < inner; ++i) out[o * inner + i] += src[base + i];
    }
  }
  return Tensor::dense(std::move(labels), std::move(dims), std::move(out));
}

Real max_abs_difference(const Tensor& a, const Tensor& b) {
  const Tensor x = a.to_dense();
  const Tensor y = b.permuted(a.labels()).to_dense();
  if (x.dims() != y.dims()) throw ContractionError("shape mismatch");
  Real worst = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    worst = std::max(worst, std::fabs(x.data()[k] - y.data()[k]));
  }
  return worst;
}

ArgmaxResult argmax_with_ties(const Tensor& v, double rel_tol,
                              std::mt19937_64& rng) {
  if (v.rank() != 1) throw ContractionError("argmax needs a rank-1 tensor");
  const Tensor d = v.to_dense();
  const auto& x = d.data();
  Real best = 0;
  for (Real e : x) {
    if (e < 0) throw std::invalid_argument("amplitudes must be nonnegative");
    best = std::max(best, e);
  }
  if (!(best > 0)) throw NoSurvivingState("no surviving state");

  ArgmaxResult r;
  const Real threshold = (Real{1} - static_cast<Real>(rel_tol)) * best;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= threshold) r.candidates.push_back(i);
  }
  r.tie_count = r.candidates.size();
  if (r.tie_count == 1) {
    r.index = r.candidates.front();
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, r.tie_count - 1);
    r.index = r.candidates[pick(rng)];
  }
  return r;
}

ArgmaxResult argmax_with_ties(const Tensor& v, double rel_tol,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return argmax_with_ties(v, rel_tol, rng);
}

}  // namespace tnroute
