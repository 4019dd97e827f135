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

// Experiment runners. Each one walks a grid of n, computes a distance
// between successive convolution powers (or a related identity), and emits
// one row per n with a pass flag that can be recomputed from the row and the
// tolerances recorded in the report metadata.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "convdist/measure.hpp"

namespace convdist::harness {

// (1 + 2 sqrt(2 pi)) / e^{3/8}: absolute constant in the Kolmogorov bound
// for sums whose summands have 0 as a q-quantile.
double quantile_bound_constant();

struct Row {
  std::int64_t n = 0;
  double raw = 0.0;
  double scaled = 0.0;
  std::optional<double> bound;
  bool pass = false;
  std::string error;  // set when the row could not be computed
  nlohmann::json extras = nlohmann::json::object();
};

struct ExperimentReport {
  std::string experiment;
  std::string id;
  std::vector<Row> rows;  // sorted by n
  nlohmann::json metadata = nlohmann::json::object();

  bool all_pass() const;
};

struct NamedMeasure {
  std::string id;
  LatticeMeasure measure;
};

// rademacher, uniform3, bernoulli(p), point(a), rademacher2d.
NamedMeasure builtin_measure(const std::string& name);

// A builtin name, or a path to a measure JSON file.
NamedMeasure resolve_measure(const std::string& name_or_path,
                             std::size_t cell_budget = kDefaultCellBudget);

struct RunConfig {
  std::vector<std::int64_t> n_grid;  // empty: powers of two within budget
  std::uint64_t seed = 0;
  std::size_t cell_budget = kDefaultCellBudget;
  std::size_t point_budget = 4000;
  double prune = 1e-12;
  int samples = 16;
  // Plateau criterion: scaled <= plateau_factor * (scaled at the smallest
  // n >= plateau_from).
  double plateau_factor = 3.0;
  std::int64_t plateau_from = 16;
  // Lower band for symmetric two-point laws under the Prokhorov rate.
  double band_ratio = 4.0;
};

// "a:b", "a:b:step" or "n1,n2,...".
std::vector<std::int64_t> parse_grid(const std::string& text);

ExperimentReport convex_rate(const NamedMeasure& f, const RunConfig& cfg);
ExperimentReport prokhorov_rate(const NamedMeasure& f, const RunConfig& cfg);
ExperimentReport skip_two(const NamedMeasure& f, const RunConfig& cfg);
ExperimentReport quantile_bound(const NamedMeasure& f, double q, const RunConfig& cfg);
ExperimentReport decomposition_path(const NamedMeasure& f, double radius, const RunConfig& cfg);
ExperimentReport coupling_demo(const NamedMeasure& f, const RunConfig& cfg);
ExperimentReport binom_tv(double p, const RunConfig& cfg);
ExperimentReport bernstein(double p, const RunConfig& cfg);
ExperimentReport gaussian_bound(const NamedMeasure& f, const RunConfig& cfg);

// experiment,id,n,raw,scaled,bound,pass
void write_csv(const ExperimentReport& report, std::ostream& out);
nlohmann::json to_json(const ExperimentReport& report);

}  // namespace convdist::harness
