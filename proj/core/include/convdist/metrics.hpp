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

// Distances between discrete measures: Kolmogorov, total variation and the
// convex-set distance (exact on the line, certified lower bound in the
// plane), plus the Levy concentration function and quantiles.

#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "convdist/measure.hpp"

namespace convdist {

enum class DistanceKind { kExact, kLowerBound };

// Interval of the line; `lo` may be -inf (a half-line).
struct IntervalSet {
  double lo;
  double hi;
  bool lo_closed = true;
  bool hi_closed = true;
};

// A finite set of atoms.
struct AtomSet {
  std::vector<Point> points;
};

// { x : lo <= normal . x <= hi }; a halfplane when one side is infinite.
struct Strip {
  Point normal;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

// Closed convex hull of the listed vertices (one or two vertices give a
// point or a segment).
struct Polygon {
  std::vector<Point> vertices;
};

using Witness = std::variant<IntervalSet, AtomSet, Strip, Polygon>;

struct DistanceReport {
  double value = 0.0;
  DistanceKind kind = DistanceKind::kExact;
  std::optional<Witness> witness;
};

// |F{A} - G{A}| for the set A described by the witness.
double evaluate_witness(const Witness& w, const LatticeMeasure& f, const LatticeMeasure& g);
double evaluate_witness(const Witness& w, const FiniteMeasure& f, const FiniteMeasure& g);

// One atom of the union support with both masses.
struct MergedAtom {
  Point x;
  double f;
  double g;
};

// Union of the atoms of f and g, coordinates identified within `tol`, sorted
// lexicographically.
std::vector<MergedAtom> merge_atoms(const std::vector<Atom>& f, const std::vector<Atom>& g,
                                    double tol, bool sorted_1d = false);

DistanceReport kolmogorov(const LatticeMeasure& f, const LatticeMeasure& g);

DistanceReport total_variation(const LatticeMeasure& f, const LatticeMeasure& g);
DistanceReport total_variation(const FiniteMeasure& f, const FiniteMeasure& g);

// sup over intervals (every convex subset of the line).
DistanceReport convex_1d(const LatticeMeasure& f, const LatticeMeasure& g);

struct Convex2dOptions {
  // The exhaustive strip search is cubic in the union support size.
  std::size_t max_points = 2000;
};

// Lower bound on the sup over convex subsets of the plane: the best of all
// singletons, all strips and halfplanes, and greedy polygons built from
// `samples` seeded random direction sets.
DistanceReport convex_2d_lower(const LatticeMeasure& f, const LatticeMeasure& g, int samples,
                               std::uint64_t seed, const Convex2dOptions& options = {});

// Levy concentration function sup_x F{[x, x + lambda]}.
double concentration(const LatticeMeasure& f, double lambda);

// Smallest atom a with F{(-inf, a)} <= q and F{(a, inf)} <= 1 - q.
double quantile(const LatticeMeasure& f, double q);

struct QuantileCheck {
  double mass_below;  // F{(-inf, a)}
  double mass_above;  // F{(a, inf)}
  bool below_ok;
  bool above_ok;
  bool ok() const { return below_ok && above_ok; }
};

QuantileCheck check_quantile(const LatticeMeasure& f, double a, double q);

}  // namespace convdist
