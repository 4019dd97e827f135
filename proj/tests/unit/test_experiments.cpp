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
#include <sstream>

#include "convdist/binomial.hpp"
#include "convdist/error.hpp"
#include "convdist/experiments.hpp"
#include "support/oracles.hpp"

namespace convdist::harness {
namespace {

RunConfig grid(std::vector<std::int64_t> n) {
  RunConfig cfg;
  cfg.n_grid = std::move(n);
  return cfg;
}

double max_binomial(std::int64_t n, double p) {
  double best = 0.0;
  for (std::int64_t k = 0; k <= n; ++k) best = std::max(best, oracle::binomial_pmf(n, p, k));
  return best;
}

TEST(Grid, Parsing) {
  EXPECT_EQ(parse_grid("2:5"), (std::vector<std::int64_t>{2, 3, 4, 5}));
  EXPECT_EQ(parse_grid("8:64:8").size(), 8u);
  EXPECT_EQ(parse_grid("16,4,4,1"), (std::vector<std::int64_t>{1, 4, 16}));
  for (const char* bad : {"", "0:4", "5:2", "a", "1:2:3:4", "3,-1", "1:4:0"}) {
    EXPECT_THROW(parse_grid(bad), InvalidInput) << bad;
  }
}

TEST(Builtins, KnownNamesAndErrors) {
  EXPECT_EQ(builtin_measure("uniform3").measure.size(), 3u);
  EXPECT_EQ(builtin_measure("rademacher2d").measure.dim(), 2);
  EXPECT_DOUBLE_EQ(builtin_measure("bernoulli(0.25)").measure.mass(1), 0.25);
  EXPECT_DOUBLE_EQ(builtin_measure("point(3)").measure.atoms()[0].x[0], 3.0);
  EXPECT_THROW(builtin_measure("bernoulli(1.5)"), InvalidInput);
  EXPECT_THROW(builtin_measure("gauss"), InvalidInput);
  EXPECT_THROW(resolve_measure("/nonexistent/measure.json"), InvalidInput);
}

TEST(ConvexRate, RademacherSecondStep) {
  const auto r = convex_rate(builtin_measure("rademacher"), grid({2}));
  const auto rad = oracle::Law{{-1, 0.5}, {1, 0.5}};
  EXPECT_DOUBLE_EQ(r.rows[0].raw, oracle::convex_1d(oracle::power(rad, 2), oracle::power(rad, 3)));
  EXPECT_DOUBLE_EQ(r.rows[0].raw, 0.5);
}

TEST(ConvexRate, BernoulliEqualsPTimesMode) {
  const auto r = convex_rate(builtin_measure("bernoulli(0.5)"), grid(parse_grid("1:40")));
  for (const auto& row : r.rows) EXPECT_NEAR(row.raw, 0.5 * max_binomial(row.n, 0.5), 1e-13);
}

TEST(ConvexRate, TrivialMeasureStaysAtOne) {
  const auto r = convex_rate(builtin_measure("point(1)"), grid({1, 2, 5, 100}));
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.raw, 1.0);
    EXPECT_NEAR(row.scaled, std::sqrt(double(row.n)), 1e-12);
    EXPECT_TRUE(row.pass);
  }
}

TEST(ConvexRate, PlateauFlagsAreRecomputable) {
  const auto r = convex_rate(builtin_measure("uniform3"), RunConfig{});
  const auto& ref = r.metadata.at("reference");
  const double limit = ref.at("limit").get<double>();
  const auto from = ref.at("n").get<std::int64_t>();
  EXPECT_EQ(from, 16);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.pass, row.n < from || row.scaled <= limit) << row.n;
  }
  EXPECT_TRUE(r.all_pass());
}

TEST(ConvexRate, DefaultGridIsPowersOfTwo) {
  const auto r = convex_rate(builtin_measure("rademacher"), RunConfig{});
  ASSERT_EQ(r.rows.size(), 13u);
  for (std::size_t i = 0; i < r.rows.size(); ++i) EXPECT_EQ(r.rows[i].n, std::int64_t{1} << i);
}

TEST(ConvexRate, BudgetExhaustionIsPerRow) {
  RunConfig cfg = grid({4, 8, 600, 1000});
  cfg.cell_budget = 500;
  const auto r = convex_rate(builtin_measure("rademacher"), cfg);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_TRUE(r.rows[0].error.empty());
  EXPECT_TRUE(r.rows[1].error.empty());
  EXPECT_FALSE(r.rows[2].error.empty());
  EXPECT_FALSE(r.rows[3].error.empty());
  EXPECT_FALSE(r.rows[3].pass);
  EXPECT_FALSE(r.all_pass());
}

TEST(ProkhorovRate, PointMassIsShiftOverRootN) {
  for (double a : {0.5, 1.0, 3.0}) {
    std::ostringstream name;
    name << "point(" << a << ")";
    const auto r = prokhorov_rate(builtin_measure(name.str()), grid(parse_grid("1:64")));
    for (const auto& row : r.rows) {
      EXPECT_NEAR(row.raw, std::min(1.0, a / std::sqrt(double(row.n))), 1e-12);
      EXPECT_TRUE(row.pass);
    }
  }
}

TEST(ProkhorovRate, RademacherBand) {
  const auto r = prokhorov_rate(builtin_measure("rademacher"), grid(parse_grid("8:64:2")));
  EXPECT_TRUE(r.all_pass());
  double lo = 1e9, hi = 0;
  for (const auto& row : r.rows) lo = std::min(lo, row.scaled), hi = std::max(hi, row.scaled);
  EXPECT_LE(hi / lo, 4.0);
}

TEST(SkipTwo, RademacherSecondPower) {
  const auto r = skip_two(builtin_measure("rademacher"), grid({2}));
  const auto rad = oracle::Law{{-1, 0.5}, {1, 0.5}};
  const double want = oracle::kolmogorov(oracle::power(rad, 2), oracle::power(rad, 4));
  EXPECT_DOUBLE_EQ(r.rows[0].raw, want);
  EXPECT_DOUBLE_EQ(r.rows[0].scaled, 2 * want);
}

TEST(SkipTwo, RejectsAsymmetric) {
  EXPECT_THROW(skip_two(builtin_measure("bernoulli(0.5)"), grid({2})), InvalidInput);
}

TEST(QuantileBound, ConstantAndSkewedLaw) {
  EXPECT_NEAR(quantile_bound_constant(), 4.132847, 5e-7);
  const NamedMeasure skew{"skew", LatticeMeasure::line(2.0, -1.0, {0.25, 0.75})};
  const auto r = quantile_bound(skew, 0.25, grid({1, 10, 100}));
  for (const auto& row : r.rows) {
    EXPECT_NEAR(*row.bound, quantile_bound_constant() / std::sqrt(row.n * 0.25), 1e-12);
    EXPECT_TRUE(row.pass);
  }
}

TEST(QuantileBound, MedianVariant) {
  const auto r = quantile_bound(builtin_measure("rademacher"), 0.5, grid({1, 7, 64}));
  for (const auto& row : r.rows) {
    EXPECT_NEAR(row.extras.at("median_bound").get<double>(),
                quantile_bound_constant() * std::sqrt(2.0 / row.n), 1e-12);
  }
}

TEST(QuantileBound, NamesTheViolatedInequality) {
  try {
    quantile_bound(builtin_measure("bernoulli(0.5)"), 0.6, grid({1}));
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("F{(0, inf)}"), std::string::npos) << e.what();
  }
  try {
    quantile_bound(builtin_measure("point(-1)"), 0.5, grid({1}));
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("F{(-inf, 0)}"), std::string::npos) << e.what();
  }
}

TEST(Decomposition, WithoutTailFirstPieceIsDirect) {
  const auto r = decomposition_path(builtin_measure("uniform3"), 1.0, grid({1, 5, 20}));
  EXPECT_EQ(r.metadata.at("p"), 0.0);
  for (const auto& row : r.rows) {
    EXPECT_DOUBLE_EQ(row.extras.at("d_first").get<double>(), row.raw);
    EXPECT_NEAR(row.extras.at("d_second").get<double>(), 0.0, 1e-15);
    EXPECT_TRUE(row.pass);
  }
}

TEST(Decomposition, BoundColumnIsTwiceBinomialTv) {
  const NamedMeasure f{"tail", LatticeMeasure::line(1.0, -1.0, {0.3, 0.3, 0.3, 0, 0, 0, 0.1})};
  const auto r = decomposition_path(f, 2.0, grid({1, 4, 30}));
  for (const auto& row : r.rows) {
    const double tv = binom_tv_identity(BinomialSpec(row.n, 0.1)).total_variation;
    EXPECT_NEAR(*row.bound, 2 * tv, 1e-15);
    EXPECT_NEAR(row.extras.at("weight_l1").get<double>(), 2 * tv, 1e-12);
    EXPECT_LE(row.raw, row.extras.at("d_first").get<double>() +
                           row.extras.at("d_second").get<double>() + 1e-10);
    EXPECT_TRUE(row.pass);
  }
}

TEST(Coupling, SolverAndNaiveCouplings) {
  const auto r = coupling_demo(builtin_measure("uniform3"), grid({1, 4, 8}));
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.pass);
    EXPECT_LE(row.extras.at("exceed_mass").get<double>(), row.raw + 1e-10);
    EXPECT_LE(row.extras.at("marginal_error").get<double>(), 1e-10);
    EXPECT_EQ(row.extras.at("naive_exceed_mass").get<double>(), 0.0);
  }
  const auto e = coupling_demo(builtin_measure("point(2)"), grid({3}));
  EXPECT_EQ(e.rows[0].extras.at("plan_entries"), 1);
}

TEST(BinomTv, ThreeWayAgreement) {
  const auto r = binom_tv(0.35, grid(parse_grid("1:300")));
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(r.id, "binomial(0.35)");
}

TEST(Bernstein, NeverViolated) {
  EXPECT_TRUE(bernstein(0.05, grid(parse_grid("1:500"))).all_pass());
}

TEST(GaussianBound, NonincreasingAndMatching) {
  const auto r = gaussian_bound(builtin_measure("bernoulli(0.3)"), grid(parse_grid("1:200")));
  EXPECT_TRUE(r.all_pass());
  EXPECT_THROW(gaussian_bound(builtin_measure("point(1)"), grid({1})), InvalidInput);
}

TEST(Report, CsvSchemaAndDeterminism) {
  auto run = [] {
    RunConfig cfg = grid({1, 2});
    cfg.seed = 5;
    std::ostringstream s;
    write_csv(convex_rate(builtin_measure("rademacher2d"), cfg), s);
    return s.str();
  };
  const auto a = run();
  EXPECT_EQ(a.substr(0, a.find('\n')), "experiment,id,n,raw,scaled,bound,pass");
  EXPECT_EQ(a, run());
  const auto j = to_json(convex_rate(builtin_measure("rademacher"), grid({3})));
  EXPECT_EQ(j.at("rows").size(), 1u);
  EXPECT_TRUE(j.at("rows")[0].at("extras").contains("witness"));
  EXPECT_TRUE(j.at("metadata").contains("wall_clock_seconds"));
}

}  // namespace
}  // namespace convdist::harness
