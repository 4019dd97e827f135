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
#include <random>

#include "convdist/error.hpp"
#include "convdist/gaussian.hpp"

namespace convdist {
namespace {

GaussianParams make1(double mean, double var) {
  return GaussianParams::make(Eigen::VectorXd::Constant(1, mean), Eigen::MatrixXd::Constant(1, 1, var));
}

// Symmetric square root of a 2x2 SPD matrix: (A + sqrt(det) I) / sqrt(tr + 2 sqrt(det)).
Eigen::Matrix2d sqrt2(const Eigen::Matrix2d& a) {
  const double s = std::sqrt(a.determinant());
  return (a + s * Eigen::Matrix2d::Identity()) / std::sqrt(a.trace() + 2 * s);
}

double bound2_oracle(const Eigen::Vector2d& b1, const Eigen::Matrix2d& s1, const Eigen::Vector2d& b2,
                     const Eigen::Matrix2d& s2) {
  const Eigen::Matrix2d r1 = sqrt2(s1).inverse();
  const Eigen::Matrix2d r2 = sqrt2(s2).inverse();
  const Eigen::Matrix2d m = r1 * s2 * r1 - Eigen::Matrix2d::Identity();
  return 0.5 * (m.norm() + (r2 * (b1 - b2)).norm());
}

TEST(GaussianTv, VarianceOnly) {
  EXPECT_DOUBLE_EQ(gaussian_tv_bound(make1(0, 4), make1(0, 5)), 0.125);
}

TEST(GaussianTv, SuccessiveExample) {
  EXPECT_DOUBLE_EQ(successive_gaussian_tv_bound(make1(0, 1), 4), 0.125);
}

TEST(GaussianTv, ZeroForIdenticalLaws) {
  EXPECT_NEAR(gaussian_tv_bound(make1(1, 2), make1(1, 2)), 0.0, 1e-15);
}

TEST(GaussianTv, MatchesClosedFormSquareRootsInThePlane) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Matrix2d a;
    a << z(rng), z(rng), z(rng), z(rng);
    Eigen::Matrix2d c;
    c << z(rng), z(rng), z(rng), z(rng);
    const Eigen::Matrix2d s1 = a * a.transpose() + 0.1 * Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d s2 = c * c.transpose() + 0.1 * Eigen::Matrix2d::Identity();
    const Eigen::Vector2d b1(z(rng), z(rng)), b2(z(rng), z(rng));
    const double got = gaussian_tv_bound(GaussianParams::make(b1, s1), GaussianParams::make(b2, s2));
    const double want = bound2_oracle(b1, s1, b2, s2);
    EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, want));
  }
}

TEST(GaussianTv, SuccessiveMatchesGeneral) {
  std::mt19937_64 rng(47);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 2;
    Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(d, d, [&] { return z(rng); });
    const Eigen::MatrixXd s = a * a.transpose() + 0.2 * Eigen::MatrixXd::Identity(d, d);
    const Eigen::VectorXd b = Eigen::VectorXd::NullaryExpr(d, [&] { return z(rng); });
    const auto base = GaussianParams::make(b, s);
    const std::int64_t n = 1 + trial;
    const double nn = double(n);
    const double general = gaussian_tv_bound(GaussianParams::make(nn * b, nn * s),
                                             GaussianParams::make((nn + 1) * b, (nn + 1) * s));
    EXPECT_NEAR(successive_gaussian_tv_bound(base, n), general, 1e-12);
  }
}

TEST(GaussianTv, SingularCovarianceRejected) {
  EXPECT_THROW(gaussian_tv_bound(make1(0, 0), make1(0, 1)), InvalidInput);
  Eigen::Matrix2d s;
  s << 1, 1, 1, 1;
  const auto g = GaussianParams::make(Eigen::Vector2d::Zero(), s);
  EXPECT_THROW(successive_gaussian_tv_bound(g, 3), InvalidInput);
}

TEST(NormalCdf, Symmetry) {
  for (double x : {0.0, 0.3, 1.7, 5.0}) EXPECT_NEAR(normal_cdf(x) + normal_cdf(-x), 1.0, 1e-15);
  EXPECT_NEAR(normal_cdf(3.0, 1.0, 2.0), normal_cdf(1.0), 1e-15);
}

}  // namespace
}  // namespace convdist
