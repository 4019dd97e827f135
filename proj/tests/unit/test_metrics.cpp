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
#include <random>

#include "convdist/error.hpp"
#include "convdist/gaussian.hpp"
#include "convdist/metrics.hpp"
#include "support/oracles.hpp"

namespace convdist {
namespace {

LatticeMeasure rademacher() { return LatticeMeasure::line(2.0, -1.0, {0.5, 0.5}); }
LatticeMeasure bern(int n) {
  std::vector<double> w(n + 1);
  for (int k = 0; k <= n; ++k) w[k] = oracle::binomial_pmf(n, 0.5, k);
  return LatticeMeasure::line(1.0, 0.0, w);
}

LatticeMeasure random_line(std::mt19937_64& rng, std::size_t k) {
  std::uniform_int_distribution<int> off(-4, 4);
  return LatticeMeasure::line(0.5, 0.5 * off(rng), oracle::random_masses(rng, k));
}

LatticeMeasure random_plane(std::mt19937_64& rng, std::size_t a, std::size_t b) {
  std::uniform_int_distribution<int> off(-2, 2);
  return LatticeMeasure(2, {1.0, 1.0}, {double(off(rng)), double(off(rng))}, {a, b},
                        oracle::random_masses(rng, a * b));
}

TEST(Kolmogorov, BinomialOneVersusTwo) {
  const auto r = kolmogorov(bern(1), bern(2));
  EXPECT_DOUBLE_EQ(r.value, 0.25);
  EXPECT_EQ(r.kind, DistanceKind::kExact);
  ASSERT_TRUE(r.witness);
  EXPECT_DOUBLE_EQ(evaluate_witness(*r.witness, bern(1), bern(2)), 0.25);
}

TEST(TotalVariation, BinomialOneVersusTwo) {
  EXPECT_DOUBLE_EQ(total_variation(bern(1), bern(2)).value, 0.25);
}

TEST(Convex1d, DisjointPointMasses) {
  EXPECT_DOUBLE_EQ(convex_1d(LatticeMeasure::point_mass(1, {0, 0}),
                             LatticeMeasure::point_mass(1, {1, 0}))
                       .value,
                   1.0);
}

TEST(Convex1d, RademacherSquaredVersusCubed) {
  // The single atom 0 of Rad^2 carries 1/2 and Rad^3 has no mass there;
  // 1/4 is the Kolmogorov value of the same pair.
  const auto a = convolve(rademacher(), rademacher());
  const auto b = convolve(a, rademacher());
  EXPECT_DOUBLE_EQ(convex_1d(a, b).value, 0.5);
  EXPECT_DOUBLE_EQ(kolmogorov(a, b).value, 0.25);
}

TEST(Metrics1d, MatchOraclesOnRandomPairs) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = random_line(rng, 1 + trial % 7);
    const auto g = random_line(rng, 1 + (trial / 7) % 7);
    const auto of = oracle::from_lattice(f), og = oracle::from_lattice(g);
    const auto k = kolmogorov(f, g), t = total_variation(f, g), c = convex_1d(f, g);
    EXPECT_NEAR(k.value, oracle::kolmogorov(of, og), 1e-14);
    EXPECT_NEAR(t.value, oracle::total_variation(of, og), 1e-14);
    EXPECT_NEAR(c.value, oracle::convex_1d(of, og), 1e-14);
    // Half-lines are intervals, intervals are sets.
    EXPECT_LE(k.value, c.value + 1e-15);
    EXPECT_LE(c.value, t.value + 1e-15);
    for (const auto* r : {&k, &t, &c}) {
      ASSERT_TRUE(r->witness);
      EXPECT_NEAR(evaluate_witness(*r->witness, f, g), r->value, 1e-14);
    }
    EXPECT_NEAR(convex_1d(g, f).value, c.value, 1e-15);
  }
}

TEST(Metrics1d, ZeroOnIdenticalMeasures) {
  std::mt19937_64 rng(2);
  const auto f = random_line(rng, 5);
  EXPECT_EQ(kolmogorov(f, f).value, 0.0);
  EXPECT_EQ(convex_1d(f, f).value, 0.0);
  EXPECT_EQ(total_variation(f, f).value, 0.0);
}

TEST(Metrics1d, ConvolutionDoesNotIncreaseConvexDistance) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_line(rng, 1 + trial % 6);
    const auto g = random_line(rng, 1 + trial % 5);
    const auto h = random_line(rng, 1 + trial % 4);
    EXPECT_LE(convex_1d(convolve(f, h), convolve(g, h)).value, convex_1d(f, g).value + 1e-12);
  }
}

TEST(TotalVariation, FiniteMeasuresOnDifferentGrids) {
  const FiniteMeasure f(1, {{0.1, 0}, {0.3, 0}}, {0.5, 0.5});
  const FiniteMeasure g(1, {{0.3, 0}, {0.7, 0}}, {0.25, 0.75});
  EXPECT_NEAR(total_variation(f, g).value, 0.75, 1e-15);
  const FiniteMeasure h(2, {{0, 0}}, {1.0});
  EXPECT_THROW(total_variation(f, h), InvalidInput);
}

TEST(Kolmogorov, RejectsPlaneMeasures) {
  const auto p = LatticeMeasure::point_mass(2, {0, 0});
  EXPECT_THROW(kolmogorov(p, p), InvalidInput);
}

TEST(Convex2d, BoundedByTotalVariationAndAboveAtomsAndMarginals) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const auto f = random_plane(rng, 2 + trial % 3, 2);
    const auto g = random_plane(rng, 2, 2 + trial % 4);
    const auto r = convex_2d_lower(f, g, 8, 99);
    EXPECT_EQ(r.kind, DistanceKind::kLowerBound);
    EXPECT_LE(r.value, total_variation(f, g).value + 1e-12);
    ASSERT_TRUE(r.witness);
    EXPECT_NEAR(evaluate_witness(*r.witness, f, g), r.value, 1e-12);
    double atom = 0.0;
    for (const auto& m : merge_atoms(f.atoms(), g.atoms(), 1e-9)) {
      atom = std::max(atom, std::abs(m.f - m.g));
    }
    EXPECT_GE(r.value + 1e-15, atom);
    // Vertical strips see every interval of the first-coordinate marginals.
    oracle::Law mf, mg;
    for (const auto& a : f.atoms()) mf[a.x[0]] += a.mass;
    for (const auto& a : g.atoms()) mg[a.x[0]] += a.mass;
    EXPECT_GE(r.value + 1e-12, oracle::convex_1d(mf, mg));
  }
}

TEST(Convex2d, DeterministicAndMonotoneInSamples) {
  std::mt19937_64 rng(37);
  const auto f = random_plane(rng, 3, 3);
  const auto g = random_plane(rng, 3, 2);
  const double a = convex_2d_lower(f, g, 4, 7).value;
  EXPECT_EQ(a, convex_2d_lower(f, g, 4, 7).value);
  EXPECT_GE(convex_2d_lower(f, g, 32, 7).value, a);
}

TEST(Convex2d, ProductRademacherFirstStep) {
  const auto r2 = LatticeMeasure(2, {2, 2}, {-1, -1}, {2, 2}, {0.25, 0.25, 0.25, 0.25});
  const auto sq = convolve(r2, r2);
  // The closed square through the four atoms of F holds only the centre of
  // F^2, which carries 1/4.
  EXPECT_GE(convex_2d_lower(r2, sq, 8, 1).value, 0.75 - 1e-15);
}

TEST(Convex2d, PointBudget) {
  const auto big = LatticeMeasure(2, {1, 1}, {0, 0}, {40, 40}, std::vector<double>(1600, 1.0 / 1600));
  Convex2dOptions opts;
  opts.max_points = 100;
  std::mt19937_64 rng(1);
  const auto other = big.with_masses(oracle::random_masses(rng, 1600));
  EXPECT_THROW(convex_2d_lower(big, other, 1, 0, opts), ResourceError);
  // Identical inputs have no signed atoms and never hit the budget.
  EXPECT_EQ(convex_2d_lower(big, big, 1, 0, opts).value, 0.0);
}

TEST(Concentration, Rademacher) {
  EXPECT_DOUBLE_EQ(concentration(rademacher(), 1.0), 0.5);
  EXPECT_DOUBLE_EQ(concentration(rademacher(), 2.0), 1.0);
}

TEST(Quantile, Examples) {
  EXPECT_DOUBLE_EQ(quantile(rademacher(), 0.5), -1.0);
  EXPECT_DOUBLE_EQ(quantile(bern(4), 0.5), 2.0);
  const auto c = check_quantile(rademacher(), 0.0, 0.5);
  EXPECT_TRUE(c.ok());
  const auto skew = LatticeMeasure::line(2.0, -1.0, {0.25, 0.75});
  EXPECT_TRUE(check_quantile(skew, 0.0, 0.25).ok());
  const auto bad = check_quantile(skew, 0.0, 0.2);
  EXPECT_FALSE(bad.below_ok);
  EXPECT_TRUE(bad.above_ok);
}

TEST(Quantile, DefinitionHoldsOnRandomLaws) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_line(rng, 1 + trial % 6);
    const double q = u(rng);
    const double a = quantile(f, q);
    EXPECT_TRUE(check_quantile(f, a, q).ok());
  }
}

// Simpson's rule on the standard normal density.
double phi_by_quadrature(double x) {
  const int n = 20000;
  const double h = x / n;
  auto dens = [](double t) { return std::exp(-t * t / 2) / std::sqrt(2 * std::numbers::pi); };
  double s = dens(0) + dens(x);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * dens(i * h);
  return 0.5 + s * h / 3;
}

TEST(GaussianKolmogorov, RademacherSingleStep) {
  EXPECT_NEAR(gaussian_kolmogorov_1d(rademacher(), 1), phi_by_quadrature(1.0) - 0.5, 1e-12);
}

TEST(GaussianKolmogorov, ShrinksWithN) {
  const auto f = LatticeMeasure::line(1.0, -1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_LT(gaussian_kolmogorov_1d(f, 400), gaussian_kolmogorov_1d(f, 25));
}

}  // namespace
}  // namespace convdist
