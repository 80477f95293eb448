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

#include <cmath>
#include <numeric>
#include <random>

#include "tnroute/tensor.hpp"

namespace tnroute {
namespace {

Tensor random_dense(std::mt19937_64& rng, std::vector<std::string> labels,
                    std::vector<std::size_t> dims, double density = 1.0) {
  std::size_t size = 1;
  for (std::size_t d : dims) size *= d;
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<Real> data(size);
  for (Real& v : data) v = keep(rng) ? value(rng) : 0.0;
  return Tensor::dense(std::move(labels), std::move(dims), std::move(data));
}

TEST(Tensor, IdentityTimesVector) {
  const Tensor id = Tensor::dense({"a", "b"}, {2, 2}, {1, 0, 0, 1});
  const Tensor v = Tensor::dense({"c"}, {2}, {3, 4});
  const Tensor r = contract(id, v, {{"b", "c"}});
  ASSERT_EQ(r.labels(), std::vector<std::string>{"a"});
  EXPECT_EQ(r.at({0}), 3);
  EXPECT_EQ(r.at({1}), 4);
}

TEST(Tensor, MatrixProductMatchesTripleLoop) {
  std::mt19937_64 rng(1);
  const Tensor a = random_dense(rng, {"i", "k"}, {2, 3});
  const Tensor b = random_dense(rng, {"k2", "j"}, {3, 2});
  const Tensor c = contract(a, b, {{"k", "k2"}});
  ASSERT_EQ(c.labels(), (std::vector<std::string>{"i", "j"}));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      Real ref = 0;
      for (std::size_t k = 0; k < 3; ++k) ref += a.at({i, k}) * b.at({k, j});
      EXPECT_NEAR(static_cast<double>(c.at({i, j})), static_cast<double>(ref),
                  1e-15);
    }
  }
}

TEST(Tensor, TraceRowSums) {
  const Tensor m = Tensor::dense({"r", "c"}, {2, 2}, {1, 2, 3, 4});
  const Tensor t = trace_index(m, "c");
  EXPECT_EQ(t.at({0}), 3);
  EXPECT_EQ(t.at({1}), 7);
}

TEST(Tensor, TraceOverUnitIndexDropsLabel) {
  const Tensor m = Tensor::dense({"a", "u"}, {3, 1}, {1, 2, 3});
  const Tensor t = trace_index(m, "u");
  EXPECT_EQ(t.labels(), std::vector<std::string>{"a"});
  EXPECT_EQ(t.data(), (std::vector<Real>{1, 2, 3}));
}

TEST(Tensor, TraceEqualsContractionWithOnes) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor t = random_dense(rng, {"a", "b", "c"}, {3, 4, 2});
    for (const std::string label : {"a", "b", "c"}) {
      const Tensor ones = Tensor::dense(
          {"o"}, {t.dim(label)}, std::vector<Real>(t.dim(label), 1));
      const Tensor via_ones = contract(t, ones, {{label, "o"}});
      EXPECT_EQ(max_abs_difference(trace_index(t, label), via_ones), 0);
    }
  }
  EXPECT_THROW(trace_index(Tensor::dense({"a"}, {1}, {1}), "zz"),
               ContractionError);
}

TEST(Tensor, DimensionMismatchThrows) {
  const Tensor a = Tensor::zeros({"x"}, {2});
  const Tensor b = Tensor::zeros({"y"}, {3});
  EXPECT_THROW(contract(a, b, {{"x", "y"}}), ContractionError);
  EXPECT_THROW(Tensor::zeros({"x", "x"}, {2, 2}), ContractionError);
  EXPECT_THROW(Tensor::sparse({"x"}, {2}, {{0, 1}, {0, 2}}), ContractionError);
  EXPECT_THROW(Tensor::sparse({"x"}, {2}, {{2, 1}}), ContractionError);
}

TEST(Tensor, Bilinearity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> alpha(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor a = random_dense(rng, {"i", "k"}, {3, 4});
    const Tensor b = random_dense(rng, {"k", "j"}, {4, 2});
    const Real s = alpha(rng);
    const Tensor lhs = contract(a.scaled(s), b, {{"k", "k"}});
    const Tensor rhs = contract(a, b, {{"k", "k"}}).scaled(s);
    EXPECT_LT(max_abs_difference(lhs, rhs), 1e-14);
  }
}

TEST(Tensor, ContractionIsSymmetricUpToTranspose) {
  std::mt19937_64 rng(4);
  const Tensor a = random_dense(rng, {"i", "k", "m"}, {2, 3, 2});
  const Tensor b = random_dense(rng, {"k", "j"}, {3, 4});
  const Tensor ab = contract(a, b, {{"k", "k"}});
  const Tensor ba = contract(b, a, {{"k", "k"}});
  EXPECT_EQ(ba.labels(), (std::vector<std::string>{"j", "i", "m"}));
  EXPECT_LT(max_abs_difference(ab, ba), 1e-15);
}

TEST(Tensor, SparseAndDenseAgree) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor a = random_dense(rng, {"i", "k", "p"}, {4, 3, 2}, 0.3);
    const Tensor b = random_dense(rng, {"k", "p", "j"}, {3, 2, 5}, 0.3);
    const IndexPairing pair{{"k", "k"}, {"p", "p"}};
    const Tensor dd = contract(a, b, pair);
    const Tensor sd = contract(a.to_sparse(), b, pair);
    const Tensor ds = contract(a, b.to_sparse(), pair);
    const Tensor ss = contract(a.to_sparse(), b.to_sparse(), pair);
    EXPECT_TRUE(ss.is_sparse());
    EXPECT_LT(max_abs_difference(dd, sd), 1e-14);
    EXPECT_LT(max_abs_difference(dd, ds), 1e-14);
    EXPECT_LT(max_abs_difference(dd, ss), 1e-14);
  }
}

TEST(Tensor, SparseSkipsZeroEntries) {
  std::vector<std::pair<std::size_t, Real>> entries{{0, 1}, {5, 2}};
  const Tensor s = Tensor::sparse({"a", "b"}, {3, 3}, entries);
  const Tensor v = Tensor::dense({"b"}, {3}, {1, 1, 1});
  ContractionStats stats;
  contract(s, v, {{"b", "b"}}, &stats);
  EXPECT_EQ(stats.multiply_adds, 2u);
  ContractionStats dense_stats;
  const Tensor full = Tensor::dense({"a", "b"}, {3, 3}, std::vector<Real>(9, 1));
  contract(full, v, {{"b", "b"}}, &dense_stats);
  EXPECT_EQ(dense_stats.multiply_adds, 9u);
}

TEST(Tensor, PermuteThenContractMatches) {
  std::mt19937_64 rng(6);
  const Tensor a = random_dense(rng, {"i", "k", "m"}, {2, 3, 4});
  const Tensor b = random_dense(rng, {"m", "k"}, {4, 3});
  const IndexPairing pair{{"k", "k"}, {"m", "m"}};
  const Tensor direct = contract(a, b, pair);
  const Tensor permuted = contract(a.permuted({"m", "i", "k"}), b, pair);
  EXPECT_LT(max_abs_difference(direct, permuted), 1e-15);
  const Tensor back = a.permuted({"m", "i", "k"}).permuted({"i", "k", "m"});
  EXPECT_EQ(max_abs_difference(a, back), 0);
}

TEST(Tensor, SliceAndRelabel) {
  const Tensor t = Tensor::dense({"a", "b"}, {2, 3}, {0, 1, 2, 3, 4, 5});
  const Tensor row = t.sliced("a", 1);
  EXPECT_EQ(row.data(), (std::vector<Real>{3, 4, 5}));
  const Tensor col = t.to_sparse().sliced("b", 2);
  EXPECT_EQ(col.to_dense().data(), (std::vector<Real>{2, 5}));
  const Tensor r = t.relabeled({{"a", "z"}});
  EXPECT_EQ(r.labels(), (std::vector<std::string>{"z", "b"}));
  EXPECT_THROW(t.relabeled({{"a", "b"}}), ContractionError);
}

TEST(ArgmaxWithTies, UniqueMaximum) {
  const Tensor v = Tensor::dense({"p"}, {3}, {0.1L, 0.9L, 0.3L});
  const ArgmaxResult r = argmax_with_ties(v, 1e-12, 1);
  EXPECT_EQ(r.index, 1u);
  EXPECT_EQ(r.tie_count, 1u);
}

TEST(ArgmaxWithTies, ExactTieIsReproducible) {
  const Tensor v = Tensor::dense({"p"}, {2}, {0.5L, 0.5L});
  const ArgmaxResult a = argmax_with_ties(v, 1e-12, 42);
  const ArgmaxResult b = argmax_with_ties(v, 1e-12, 42);
  EXPECT_EQ(a.tie_count, 2u);
  EXPECT_EQ(a.index, b.index);
  EXPECT_LE(a.index, 1u);
  bool saw[2] = {false, false};
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    saw[argmax_with_ties(v, 1e-12, seed).index] = true;
  }
  EXPECT_TRUE(saw[0] && saw[1]);
}

TEST(ArgmaxWithTies, AllZeroRaisesNoSurvivingState) {
  const Tensor v = Tensor::zeros({"p"}, {3});
  EXPECT_THROW(argmax_with_ties(v, 1e-12, 0), NoSurvivingState);
  const Tensor neg = Tensor::dense({"p"}, {2}, {1, -1});
  EXPECT_THROW(argmax_with_ties(neg, 1e-12, 0), std::invalid_argument);
}

TEST(ArgmaxWithTies, ScaleInvariantCandidateSet) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> value(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Real> data(6);
    for (Real& x : data) x = value(rng);
    data[0] = 4;
    const Tensor v = Tensor::dense({"p"}, {6}, data);
    const auto base = argmax_with_ties(v, 1e-12, 3).candidates;
    for (Real s : {Real{1e-300L}, Real{3.0L}, Real{1e200L}}) {
      EXPECT_EQ(argmax_with_ties(v.scaled(s), 1e-12, 3).candidates, base);
    }
  }
}

TEST(Tensor, NarrowedKeepsARangeOfOneAxis) {
  std::vector<Real> data(24);
  std::iota(data.begin(), data.end(), 0);
  const Tensor t = Tensor::dense({"a", "b", "c"}, {2, 4, 3}, data);
  for (const Tensor& src : {t, t.to_sparse()}) {
    const Tensor n = src.narrowed("b", 1, 2);
    EXPECT_EQ(n.dims(), (std::vector<std::size_t>{2, 2, 3}));
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        for (std::size_t c = 0; c < 3; ++c) {
          EXPECT_EQ(n.at({a, b, c}), t.at({a, b + 1, c}));
        }
      }
    }
  }
  EXPECT_THROW(t.narrowed("b", 3, 2), ContractionError);
  EXPECT_THROW(t.narrowed("b", 0, 0), ContractionError);
}

}  // namespace
}  // namespace tnroute
