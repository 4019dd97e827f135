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

// Reference computations used only by tests. Each one follows the textbook
// definition with no shortcuts so it can check the library independently.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "convdist/measure.hpp"

namespace convdist::oracle {

// One-dimensional law as position -> mass. Positions in tests are dyadic or
// integral so sums of positions are exact.
using Law = std::map<double, double>;

inline Law from_lattice(const LatticeMeasure& f) {
  Law out;
  for (const auto& a : f.atoms()) out[a.x[0]] += a.mass;
  return out;
}

inline Law convolve(const Law& a, const Law& b) {
  Law out;
  for (const auto& [x, p] : a) {
    for (const auto& [y, q] : b) out[x + y] += p * q;
  }
  return out;
}

inline Law power(const Law& a, int n) {
  Law out{{0.0, 1.0}};
  for (int i = 0; i < n; ++i) out = convolve(out, a);
  return out;
}

inline std::vector<double> union_support(const Law& a, const Law& b) {
  std::vector<double> xs;
  for (const auto& [x, p] : a) xs.push_back(x);
  for (const auto& [x, p] : b) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

inline double mass_at(const Law& a, double x) {
  auto it = a.find(x);
  return it == a.end() ? 0.0 : it->second;
}

// sup_x |F(-inf, x] - G(-inf, x]|, recomputing each CDF from scratch.
inline double kolmogorov(const Law& a, const Law& b) {
  double best = 0.0;
  for (double x : union_support(a, b)) {
    double fa = 0.0, fb = 0.0;
    for (const auto& [y, p] : a) if (y <= x) fa += p;
    for (const auto& [y, q] : b) if (y <= x) fb += q;
    best = std::max(best, std::abs(fa - fb));
  }
  return best;
}

inline double total_variation(const Law& a, const Law& b) {
  double pos = 0.0;
  for (double x : union_support(a, b)) pos += std::max(0.0, mass_at(a, x) - mass_at(b, x));
  return pos;
}

// Every closed interval with endpoints on the union support.
inline double convex_1d(const Law& a, const Law& b) {
  const auto xs = union_support(a, b);
  double best = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double diff = 0.0;
    for (std::size_t j = i; j < xs.size(); ++j) {
      diff += mass_at(a, xs[j]) - mass_at(b, xs[j]);
      best = std::max(best, std::abs(diff));
    }
  }
  return best;
}

inline double binomial_pmf(std::int64_t n, double p, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  const double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(lg + k * std::log(p) + (n - k) * std::log1p(-p));
}

// Prokhorov distance from the definition: for each candidate radius r, the
// slack needed so that F(A) <= G(A^r) + slack over every subset A of supp F.
inline double prokhorov(const std::vector<Point>& xs, const std::vector<double>& p,
                        const std::vector<Point>& ys, const std::vector<double>& q) {
  // Radii where the left side can change, plus the deficiency values that
  // can be the binding eps.
  std::vector<double> radii{0.0};
  for (const auto& x : xs) {
    for (const auto& y : ys) radii.push_back(std::hypot(x[0] - y[0], x[1] - y[1]));
  }
  std::sort(radii.begin(), radii.end());
  double best = 1.0;
  for (double r : radii) {
    if (r >= best) break;
    // Smallest slack s >= 0 making every subset inequality hold at radius r.
    double need = 0.0;
    const std::size_t m = xs.size();
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      double fa = 0.0, ga = 0.0;
      for (std::size_t i = 0; i < m; ++i) if (mask >> i & 1u) fa += p[i];
      for (std::size_t j = 0; j < ys.size(); ++j) {
        for (std::size_t i = 0; i < m; ++i) {
          if ((mask >> i & 1u) &&
              std::hypot(xs[i][0] - ys[j][0], xs[i][1] - ys[j][1]) <= r + 1e-12) {
            ga += q[j];
            break;
          }
        }
      }
      need = std::max(need, fa - ga);
    }
    best = std::min(best, std::max(r, need));
  }
  return best;
}

// Seeded random probability vector with `k` entries, all multiples of
// 2^-bits when bits > 0.
inline std::vector<double> random_masses(std::mt19937_64& rng, std::size_t k, int bits = 0) {
  std::vector<double> w(k);
  if (bits > 0) {
    const std::int64_t total = std::int64_t{1} << bits;
    std::vector<std::int64_t> cuts;
    std::uniform_int_distribution<std::int64_t> d(0, total);
    for (std::size_t i = 0; i + 1 < k; ++i) cuts.push_back(d(rng));
    cuts.push_back(0);
    cuts.push_back(total);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i < k; ++i) w[i] = double(cuts[i + 1] - cuts[i]) / double(total);
    return w;
  }
  std::uniform_real_distribution<double> u(0.05, 1.0);
  double s = 0.0;
  for (auto& x : w) s += (x = u(rng));
  for (auto& x : w) x /= s;
  return w;
}

}  // namespace convdist::oracle
