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

#include "convdist/gaussian.hpp"

#include <cmath>

#include "convdist/error.hpp"

namespace convdist {
namespace {

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  if (lambda.minCoeff() <= kSingularEigenvalue) {
    throw InvalidInput("covariance matrix is singular");
  }
  return eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

double gaussian_tv_bound(const GaussianParams& phi1, const GaussianParams& phi2) {
  if (phi1.dim() != phi2.dim()) throw InvalidInput("Gaussian laws of different dimension");
  const Eigen::MatrixXd a = inverse_sqrt(phi1.covariance);
  const Eigen::MatrixXd b = inverse_sqrt(phi2.covariance);
  const Eigen::MatrixXd m = a * phi2.covariance * a;
  const auto d = phi1.dim();
  const double shape = (m - Eigen::MatrixXd::Identity(d, d)).norm();
  const double location = (b * (phi1.mean - phi2.mean)).norm();
  return 0.5 * (shape + location);
}

double successive_gaussian_tv_bound(const GaussianParams& base, std::int64_t n) {
  if (n < 1) throw InvalidInput("n must be at least 1");
  const double drift = (inverse_sqrt(base.covariance) * base.mean).norm();
  const double nd = static_cast<double>(n);
  return 0.5 * (std::sqrt(static_cast<double>(base.dim())) / nd + drift / std::sqrt(nd + 1.0));
}

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * M_SQRT2));
}

double gaussian_kolmogorov_1d(const LatticeMeasure& f, std::int64_t n, std::size_t cell_budget) {
  if (f.dim() != 1) throw InvalidInput("normal comparison is one-dimensional");
  if (n < 1) throw InvalidInput("n must be at least 1");
  const Moments mom = moments(f);
  const double variance = mom.covariance(0, 0);
  if (f.atoms().size() < 2 || !(variance > 0.0)) {
    throw InvalidInput("normal comparison needs a nondegenerate measure");
  }
  const double nd = static_cast<double>(n);
  const double mean = nd * mom.mean[0];
  const double sd = std::sqrt(nd * variance);
  const LatticeMeasure fn = power(f, n, cell_budget);
  const double total = fn.total_mass();
  double below = 0.0;
  double sup = 0.0;
  for (const auto& a : fn.atoms()) {
    const double phi = normal_cdf(a.x[0], mean, sd);
    const double above = below + a.mass / total;
    sup = std::max({sup, std::abs(below - phi), std::abs(above - phi)});
    below = above;
  }
  return sup;
}

}  // namespace convdist
