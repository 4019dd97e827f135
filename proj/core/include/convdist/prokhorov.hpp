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

// Exact Prokhorov distance between finite measures. With closed
// neighbourhoods, the least mass that cannot be moved within radius r is
// deficiency(r) = 1 - maxflow(r) on the bipartite graph of pairs at distance
// <= r; it is a nonincreasing step function with jumps at pairwise distances,
// and the distance is min over breakpoints r of max(r, deficiency(r)),
// capped at one. The maximizing flow completes to a coupling that certifies
// the value.

#include <cstddef>
#include <vector>

#include "convdist/measure.hpp"

namespace convdist {

struct CouplingEntry {
  std::size_t row;
  std::size_t col;
  double mass;
};

// Sparse joint law of (xi, eta) with xi ~ F on row_points, eta ~ G on
// col_points.
struct CouplingPlan {
  std::vector<Point> row_points;
  std::vector<Point> col_points;
  std::vector<CouplingEntry> joint;

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
};

struct DeficiencyPoint {
  double radius;
  double deficiency;
};

struct ProkhorovResult {
  double epsilon;
  // Sorted by radius; every evaluated breakpoint (all of them with
  // ProkhorovOptions::full_curve).
  std::vector<DeficiencyPoint> deficiency_curve;
  CouplingPlan plan;
  double plan_radius;      // breakpoint whose flow produced the plan
  bool integer_flow;       // masses were dyadic and the flow ran on int64
};

struct ProkhorovOptions {
  std::size_t max_points = 4000;
  bool full_curve = false;
};

// Euclidean distance; the one metric used throughout.
double distance(const Point& a, const Point& b);

ProkhorovResult prokhorov_exact(const FiniteMeasure& f, const FiniteMeasure& g,
                                const ProkhorovOptions& options = {});

// Definition-level oracle: enumerates every subset of each support. Needs
// |supp F| + |supp G| <= 16.
double prokhorov_bruteforce(const FiniteMeasure& f, const FiniteMeasure& g);

struct CouplingCheck {
  double exceed_mass;  // joint mass on pairs farther apart than epsilon
  bool ok;             // exceed_mass <= epsilon + 1e-10
};

CouplingCheck coupling_check(const CouplingPlan& plan, double epsilon);

// Independent coupling F x G.
CouplingPlan product_plan(const FiniteMeasure& f, const FiniteMeasure& g);

struct ScalingTransfer {
  double lhs;  // pi(F_(b), G_(b))
  double rhs;  // max(sqrt(a / b), 1) * pi(F_(a), G_(a))
};

ScalingTransfer scaling_transfer(const FiniteMeasure& f, const FiniteMeasure& g, double a,
                                 double b, const ProkhorovOptions& options = {});

}  // namespace convdist
