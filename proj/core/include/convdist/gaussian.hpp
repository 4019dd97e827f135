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

// Total-variation bounds between Gaussian laws and the one-dimensional
// Kolmogorov distance between a lattice power and its normal approximation.

#include <cstdint>

#include "convdist/measure.hpp"

namespace convdist {

// Covariances with smallest eigenvalue at or below this are singular.
inline constexpr double kSingularEigenvalue = 1e-12;

// (|| S1^{-1/2} S2 S1^{-1/2} - I ||_F + || S2^{-1/2} (b1 - b2) ||) / 2 with
// symmetric square roots. Upper bound on the total variation distance
// between N(b1, S1) and N(b2, S2).
double gaussian_tv_bound(const GaussianParams& phi1, const GaussianParams& phi2);

// The bound above for N(n b, n S) versus N((n + 1) b, (n + 1) S), in closed
// form: (sqrt(d) / n + || S^{-1/2} b || / sqrt(n + 1)) / 2.
double successive_gaussian_tv_bound(const GaussianParams& base, std::int64_t n);

// Phi((x - mean) / sd) through erfc.
double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

// sup_x |F^n(x) - Phi_n(x)| where Phi_n is the normal law with the mean and
// variance of F^n. F must be one-dimensional with positive variance.
double gaussian_kolmogorov_1d(const LatticeMeasure& f, std::int64_t n,
                              std::size_t cell_budget = kDefaultCellBudget);

}  // namespace convdist
