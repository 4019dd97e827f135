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

#include <benchmark/benchmark.h>

#include <random>

#include "convdist/binomial.hpp"
#include "convdist/measure.hpp"
#include "convdist/metrics.hpp"
#include "convdist/prokhorov.hpp"

namespace {

using namespace convdist;

std::vector<double> masses(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(k);
  double s = 0.0;
  for (auto& x : w) s += (x = u(rng));
  for (auto& x : w) x /= s;
  return w;
}

void BM_ConvolveDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = LatticeMeasure::line(1.0, 0.0, masses(n, 1));
  const auto g = LatticeMeasure::line(1.0, 0.0, masses(n, 2));
  for (auto _ : state) benchmark::DoNotOptimize(convolve(f, g, ConvolveMethod::kDirect));
}
BENCHMARK(BM_ConvolveDirect)->RangeMultiplier(4)->Range(64, 4096);

void BM_ConvolveFft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = LatticeMeasure::line(1.0, 0.0, masses(n, 1));
  const auto g = LatticeMeasure::line(1.0, 0.0, masses(n, 2));
  for (auto _ : state) benchmark::DoNotOptimize(convolve(f, g, ConvolveMethod::kFft));
}
BENCHMARK(BM_ConvolveFft)->RangeMultiplier(4)->Range(64, 4096);

void BM_PowerUniform3(benchmark::State& state) {
  const auto f = LatticeMeasure::line(1.0, -1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  for (auto _ : state) benchmark::DoNotOptimize(power(f, state.range(0)));
}
BENCHMARK(BM_PowerUniform3)->RangeMultiplier(4)->Range(16, 16384);

void BM_Convex1d(benchmark::State& state) {
  const auto f = LatticeMeasure::line(1.0, -1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto a = power(f, state.range(0));
  const auto b = convolve(a, f);
  for (auto _ : state) benchmark::DoNotOptimize(convex_1d(a, b));
}
BENCHMARK(BM_Convex1d)->RangeMultiplier(8)->Range(16, 8192);

void BM_Convex2dLower(benchmark::State& state) {
  const auto f = LatticeMeasure(2, {2, 2}, {-1, -1}, {2, 2}, {0.25, 0.25, 0.25, 0.25});
  const auto a = power(f, state.range(0));
  const auto b = convolve(a, f);
  for (auto _ : state) benchmark::DoNotOptimize(convex_2d_lower(a, b, 8, 0));
}
BENCHMARK(BM_Convex2dLower)->DenseRange(2, 8, 2);

void BM_ProkhorovRescaledPowers(benchmark::State& state) {
  const auto n = state.range(0);
  const auto f = rescale(LatticeMeasure::line(1.0, -1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3}), double(n));
  const auto a = to_finite(power(f, n), 1e-12).measure;
  const auto b = to_finite(power(f, n + 1), 1e-12).measure;
  for (auto _ : state) benchmark::DoNotOptimize(prokhorov_exact(a, b));
}
BENCHMARK(BM_ProkhorovRescaledPowers)->RangeMultiplier(4)->Range(4, 1024);

void BM_ProkhorovRandom(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&](std::uint64_t seed) {
    std::vector<Point> pts(k);
    for (auto& x : pts) x = {u(rng), u(rng)};
    return FiniteMeasure(2, pts, masses(k, seed));
  };
  const auto a = draw(4), b = draw(5);
  for (auto _ : state) benchmark::DoNotOptimize(prokhorov_exact(a, b));
}
BENCHMARK(BM_ProkhorovRandom)->RangeMultiplier(2)->Range(8, 128);

void BM_BinomTvIdentity(benchmark::State& state) {
  const BinomialSpec spec(state.range(0), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(binom_tv_identity(spec));
}
BENCHMARK(BM_BinomTvIdentity)->RangeMultiplier(10)->Range(10, 100000);

}  // namespace

BENCHMARK_MAIN();
