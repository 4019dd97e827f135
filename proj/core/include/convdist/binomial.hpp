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

#pragma once

// Binomial laws B_{n,p} and the identities around the distance between
// B_{n,p} and B_{n+1,p}.

#include <cstdint>
#include <vector>

#include "convdist/measure.hpp"

namespace convdist {

// B_{n,p} with n >= 1 and 0 < p < 1.
class BinomialSpec {
 public:
  static constexpr std::int64_t kMaxTrials = 10'000'000;

  BinomialSpec(std::int64_t n, double p);

  std::int64_t n() const { return n_; }
  double p() const { return p_; }

 private:
  std::int64_t n_;
  double p_;
};

// b_k(n, p) for k = 0..n, p in [0, 1]. Log-weights are accumulated outward
// from the mode by the ratio recurrence, exponentiated relative to the mode
// (so nothing overflows) and normalized to total one.
std::vector<double> binomial_weights(std::int64_t n, double p);

// B_{n,p} on the integer grid (step 1, offset 0).
LatticeMeasure binom_pmf(const BinomialSpec& spec);

struct BinomialDistances {
  double total_variation;  // sup over sets, via the union-of-atoms computation
  double kolmogorov;       // CDF sweep
  double p_times_mode;     // p * max_k b_k(n, p)
};

// Three independent evaluations of the distance between B_{n,p} and
// B_{n+1,p}; they agree for every n and p.
BinomialDistances binom_tv_identity(const BinomialSpec& spec);

// b_k(n+1, p) / b_k(n, p) = (n + 1)(1 - p) / (n + 1 - k) for k = 0..n.
std::vector<double> binomial_ratios(const BinomialSpec& spec);

// True iff binomial_ratios is strictly increasing in k.
bool ratio_monotone(const BinomialSpec& spec);

struct BernsteinCheck {
  double exact_tail;  // P{eta - np >= np(1 - p)}
  double bound;       // exp(-np(1 - p) / 4)
};

BernsteinCheck bernstein_bound(const BinomialSpec& spec);

}  // namespace convdist
