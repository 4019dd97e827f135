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

#include "convdist/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "convdist/error.hpp"
#include "convdist/metrics.hpp"

namespace convdist {

BinomialSpec::BinomialSpec(std::int64_t n, double p) : n_(n), p_(p) {
  if (n < 1) throw InvalidInput("binomial n must be at least 1");
  if (n > kMaxTrials) {
    throw InvalidInput("binomial n = " + std::to_string(n) + " exceeds the supported maximum " +
                       std::to_string(kMaxTrials));
  }
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("binomial p must lie in (0, 1)");
}

std::vector<double> binomial_weights(std::int64_t n, double p) {
  if (n < 0) throw InvalidInput("binomial n must be nonnegative");
  if (n > BinomialSpec::kMaxTrials) {
    throw InvalidInput("binomial n = " + std::to_string(n) + " exceeds the supported maximum");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("binomial p must lie in [0, 1]");
  const auto size = static_cast<std::size_t>(n + 1);
  std::vector<double> w(size, 0.0);
  if (p == 0.0) {
    w.front() = 1.0;
    return w;
  }
  if (p == 1.0) {
    w.back() = 1.0;
    return w;
  }
  const double log_odds = std::log(p) - std::log1p(-p);
  const auto mode = std::min<std::int64_t>(
      n, static_cast<std::int64_t>(std::floor(static_cast<double>(n + 1) * p)));
  std::vector<double> log_w(size, 0.0);
  for (std::int64_t k = mode; k < n; ++k) {
    log_w[k + 1] = log_w[k] + std::log(static_cast<double>(n - k) / static_cast<double>(k + 1)) +
                   log_odds;
  }
  for (std::int64_t k = mode; k > 0; --k) {
    log_w[k - 1] = log_w[k] + std::log(static_cast<double>(k) / static_cast<double>(n - k + 1)) -
                   log_odds;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < size; ++k) {
    w[k] = std::exp(log_w[k]);
    total += w[k];
  }
  for (double& v : w) v /= total;
  return w;
}

LatticeMeasure binom_pmf(const BinomialSpec& spec) {
  return LatticeMeasure::line(1.0, 0.0, binomial_weights(spec.n(), spec.p()));
}

BinomialDistances binom_tv_identity(const BinomialSpec& spec) {
  const std::vector<double> wn = binomial_weights(spec.n(), spec.p());
  const LatticeMeasure bn = LatticeMeasure::line(1.0, 0.0, wn);
  const LatticeMeasure bn1 = binom_pmf(BinomialSpec(spec.n() + 1, spec.p()));
  return BinomialDistances{
      total_variation(bn, bn1).value,
      kolmogorov(bn, bn1).value,
      spec.p() * *std::max_element(wn.begin(), wn.end()),
  };
}

std::vector<double> binomial_ratios(const BinomialSpec& spec) {
  const double n1 = static_cast<double>(spec.n() + 1);
  std::vector<double> r(static_cast<std::size_t>(spec.n() + 1));
  for (std::int64_t k = 0; k <= spec.n(); ++k) {
    r[k] = n1 * (1.0 - spec.p()) / (n1 - static_cast<double>(k));
  }
  return r;
}

bool ratio_monotone(const BinomialSpec& spec) {
  const auto r = binomial_ratios(spec);
  return std::adjacent_find(r.begin(), r.end(), [](double a, double b) { return !(a < b); }) ==
         r.end();
}

BernsteinCheck bernstein_bound(const BinomialSpec& spec) {
  const double n = static_cast<double>(spec.n());
  const double p = spec.p();
  const double threshold = n * p * (2.0 - p);
  // Round the threshold down slightly so rounding can only enlarge the tail.
  const double from = threshold - 1e-9 * std::max(1.0, threshold);
  const auto w = binomial_weights(spec.n(), p);
  double tail = 0.0;
  for (std::int64_t k = spec.n(); k >= 0 && static_cast<double>(k) >= from; --k) tail += w[k];
  return BernsteinCheck{tail, std::exp(-n * p * (1.0 - p) / 4.0)};
}

}  // namespace convdist
