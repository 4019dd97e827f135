// Copyright 2026 The convdist Authors
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
#include <numbers>

#include "convdist/binomial.hpp"
#include "convdist/error.hpp"
#include "support/oracles.hpp"

namespace convdist {
namespace {

TEST(BinomialSpec, RejectsBadParameters) {
  EXPECT_THROW(BinomialSpec(0, 0.5), InvalidInput);
  EXPECT_THROW(BinomialSpec(5, 0.0), InvalidInput);
  EXPECT_THROW(BinomialSpec(5, 1.0), InvalidInput);
  EXPECT_THROW(BinomialSpec(BinomialSpec::kMaxTrials + 1, 0.5), InvalidInput);
}

TEST(BinomPmf, TwoTrialsHalf) {
  const auto b = binom_pmf(BinomialSpec(2, 0.5));
  ASSERT_EQ(b.size(), 3u);
  EXPECT_DOUBLE_EQ(b.mass(0), 0.25);
  EXPECT_DOUBLE_EQ(b.mass(1), 0.5);
  EXPECT_DOUBLE_EQ(b.mass(2), 0.25);
}

TEST(BinomialWeights, MatchLogGammaOracle) {
  for (std::int64_t n : {1, 7, 50, 333, 2000, 100000}) {
    for (double p : {0.01, 0.3, 0.5, 0.77, 0.99}) {
      const auto w = binomial_weights(n, p);
      ASSERT_EQ(w.size(), std::size_t(n + 1));
      double total = 0.0;
      for (std::int64_t k = 0; k <= n; ++k) {
        total += w[k];
        const double o = oracle::binomial_pmf(n, p, k);
        EXPECT_NEAR(w[k], o, 1e-12 * std::max(1.0, o * 1e3)) << n << " " << p << " " << k;
      }
      EXPECT_NEAR(total, 1.0, 1e-13);
    }
  }
}

TEST(BinomialWeights, DegenerateEnds) {
  EXPECT_EQ(binomial_weights(4, 0.0)[0], 1.0);
  EXPECT_EQ(binomial_weights(4, 1.0)[4], 1.0);
}

TEST(BinomialRatios, Example) {
  const auto r = binomial_ratios(BinomialSpec(3, 0.3));
  ASSERT_EQ(r.size(), 4u);
  for (int k = 0; k <= 3; ++k) EXPECT_NEAR(r[k], 0.7 * 4 / (4 - k), 1e-15);
  EXPECT_TRUE(ratio_monotone(BinomialSpec(3, 0.3)));
}

TEST(BinomialRatios, AgreeWithPmfQuotients) {
  for (std::int64_t n : {2, 10, 40}) {
    for (double p : {0.1, 0.5, 0.9}) {
      const auto r = binomial_ratios(BinomialSpec(n, p));
      for (std::int64_t k = 0; k <= n; ++k) {
        EXPECT_NEAR(r[k], oracle::binomial_pmf(n + 1, p, k) / oracle::binomial_pmf(n, p, k),
                    1e-10 * r[k]);
      }
      EXPECT_TRUE(ratio_monotone(BinomialSpec(n, p)));
    }
  }
}

TEST(BinomTvIdentity, AgreesWithOracleTotalVariation) {
  for (std::int64_t n : {1, 2, 9, 64, 500}) {
    for (double p : {0.05, 0.5, 0.95}) {
      const auto d = binom_tv_identity(BinomialSpec(n, p));
      oracle::Law a, b;
      for (std::int64_t k = 0; k <= n + 1; ++k) {
        if (k <= n) a[double(k)] = oracle::binomial_pmf(n, p, k);
        b[double(k)] = oracle::binomial_pmf(n + 1, p, k);
      }
      EXPECT_NEAR(d.total_variation, oracle::total_variation(a, b), 1e-12);
      EXPECT_NEAR(d.kolmogorov, d.total_variation, 1e-12);
      EXPECT_NEAR(d.p_times_mode, d.total_variation, 1e-12);
    }
  }
}

TEST(BinomTvIdentity, LocalLimit) {
  for (double p : {0.1, 0.5, 0.8}) {
    const double limit = std::sqrt(p / (2 * std::numbers::pi * (1 - p)));
    for (std::int64_t n : {500, 2000, 20000}) {
      const double scaled = std::sqrt(double(n)) * binom_tv_identity(BinomialSpec(n, p)).total_variation;
      EXPECT_GE(scaled, 0.9 * limit);
      EXPECT_LE(scaled, 1.1 * limit);
    }
  }
}

TEST(Bernstein, HundredHalf) {
  const auto c = bernstein_bound(BinomialSpec(100, 0.5));
  EXPECT_NEAR(c.bound, std::exp(-6.25), 1e-18);
  double tail = 0.0;
  for (int k = 75; k <= 100; ++k) tail += oracle::binomial_pmf(100, 0.5, k);
  EXPECT_NEAR(c.exact_tail, tail, 1e-18);
  EXPECT_LE(c.exact_tail, c.bound);
}

TEST(Bernstein, ThresholdOnAnAtomIsIncluded) {
  // np(2 - p) = 6 for n = 8, p = 1/2.
  const auto c = bernstein_bound(BinomialSpec(8, 0.5));
  double tail = 0.0;
  for (int k = 6; k <= 8; ++k) tail += oracle::binomial_pmf(8, 0.5, k);
  EXPECT_NEAR(c.exact_tail, 37.0 / 256.0, 1e-15);
  EXPECT_NEAR(tail, 37.0 / 256.0, 1e-15);
}

}  // namespace
}  // namespace convdist
