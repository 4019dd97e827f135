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

#include "convdist/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "convdist/error.hpp"

namespace convdist {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double finite_tolerance(const std::vector<Atom>& f, const std::vector<Atom>& g) {
  double scale = 1.0;
  for (const auto* atoms : {&f, &g}) {
    for (const auto& a : *atoms) scale = std::max({scale, std::abs(a.x[0]), std::abs(a.x[1])});
  }
  return 1e-12 * scale;
}

std::vector<MergedAtom> merged(const LatticeMeasure& f, const LatticeMeasure& g) {
  if (f.dim() != g.dim()) throw InvalidInput("measures have different dimensions");
  return merge_atoms(f.atoms(), g.atoms(), coordinate_tolerance(f, g), f.dim() == 1);
}

void require_line(const LatticeMeasure& f, const LatticeMeasure& g, const char* what) {
  if (f.dim() != 1 || g.dim() != 1) {
    throw InvalidInput(std::string(what) + " is defined here for one-dimensional measures only");
  }
}

DistanceReport total_variation_of(const std::vector<MergedAtom>& atoms) {
  double pos = 0.0;
  double neg = 0.0;
  for (const auto& a : atoms) {
    const double d = a.f - a.g;
    (d > 0.0 ? pos : neg) += std::abs(d);
  }
  AtomSet witness;
  const bool f_side = pos >= neg;
  for (const auto& a : atoms) {
    if (f_side ? a.f > a.g : a.g > a.f) witness.points.push_back(a.x);
  }
  return DistanceReport{std::max(pos, neg), DistanceKind::kExact, Witness{std::move(witness)}};
}

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool in_polygon(const std::vector<Point>& hull, const Point& x, double tol) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return std::hypot(x[0] - hull[0][0], x[1] - hull[0][1]) <= tol;
  if (hull.size() == 2) {
    const Point& a = hull[0];
    const Point& b = hull[1];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    if (std::abs(cross(a, b, x)) > tol * len) return false;
    const double t = ((x[0] - a[0]) * (b[0] - a[0]) + (x[1] - a[1]) * (b[1] - a[1])) / len;
    return t >= -tol && t <= len + tol;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point& a = hull[i];
    const Point& b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    if (cross(a, b, x) < -tol * len) return false;
  }
  return true;
}

bool contains(const Witness& w, const Point& x, double tol) {
  return std::visit(
      [&](const auto& set) -> bool {
        using T = std::decay_t<decltype(set)>;
        if constexpr (std::is_same_v<T, IntervalSet>) {
          const bool above = set.lo_closed ? x[0] >= set.lo - tol : x[0] > set.lo + tol;
          const bool below = set.hi_closed ? x[0] <= set.hi + tol : x[0] < set.hi - tol;
          return above && below;
        } else if constexpr (std::is_same_v<T, AtomSet>) {
          return std::any_of(set.points.begin(), set.points.end(), [&](const Point& p) {
            return std::abs(p[0] - x[0]) <= tol && std::abs(p[1] - x[1]) <= tol;
          });
        } else if constexpr (std::is_same_v<T, Strip>) {
          const double s = set.normal[0] * x[0] + set.normal[1] * x[1];
          return s >= set.lo && s <= set.hi;
        } else {
          return in_polygon(set.vertices, x, tol);
        }
      },
      w);
}

double evaluate(const Witness& w, const std::vector<Atom>& f, const std::vector<Atom>& g,
                double tol) {
  // Hulls are rebuilt once rather than per query.
  Witness prepared = w;
  if (auto* poly = std::get_if<Polygon>(&prepared)) poly->vertices = convex_hull(poly->vertices);
  double fa = 0.0;
  double ga = 0.0;
  for (const auto& a : f) {
    if (contains(prepared, a.x, tol)) fa += a.mass;
  }
  for (const auto& a : g) {
    if (contains(prepared, a.x, tol)) ga += a.mass;
  }
  return std::abs(fa - ga);
}

struct Run {
  double sum = 0.0;
  std::size_t first = 0;
  std::size_t last = 0;
};

// Largest and smallest contiguous sums (empty run allowed, value 0).
std::pair<Run, Run> extreme_runs(const std::vector<double>& v) {
  Run best_max, best_min;
  double cur_max = 0.0, cur_min = 0.0;
  std::size_t start_max = 0, start_min = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cur_max <= 0.0) cur_max = 0.0, start_max = i;
    if (cur_min >= 0.0) cur_min = 0.0, start_min = i;
    cur_max += v[i];
    cur_min += v[i];
    if (cur_max > best_max.sum) best_max = {cur_max, start_max, i};
    if (cur_min < best_min.sum) best_min = {cur_min, start_min, i};
  }
  return {best_max, best_min};
}

struct Candidate {
  double value = 0.0;
  std::optional<Witness> witness;
  void offer(double v, const auto& make_witness) {
    if (v > value) {
      value = v;
      witness = make_witness();
    }
  }
};

struct SignedPoint {
  Point x;
  double d;
};

// Best strip { lo <= u.x <= hi } for direction u: Kadane over the points
// grouped by (tolerantly) equal projection.
void best_strip(const std::vector<SignedPoint>& pts, const Point& u, double tie_tol,
                std::vector<std::pair<double, double>>& scratch, Candidate& best) {
  scratch.clear();
  for (const auto& p : pts) scratch.emplace_back(u[0] * p.x[0] + u[1] * p.x[1], p.d);
  std::sort(scratch.begin(), scratch.end());
  std::vector<double> sums;
  std::vector<double> lo_proj, hi_proj;
  for (std::size_t i = 0; i < scratch.size();) {
    std::size_t j = i;
    double s = 0.0;
    while (j < scratch.size() && scratch[j].first - scratch[i].first <= tie_tol) {
      s += scratch[j].second;
      ++j;
    }
    sums.push_back(s);
    lo_proj.push_back(scratch[i].first);
    hi_proj.push_back(scratch[j - 1].first);
    i = j;
  }
  const auto [mx, mn] = extreme_runs(sums);
  for (const Run& run : {mx, mn}) {
    const double v = std::abs(run.sum);
    best.offer(v, [&] {
      Strip s{u};
      s.lo = run.first == 0 ? -kInf : 0.5 * (hi_proj[run.first - 1] + lo_proj[run.first]);
      s.hi = run.last + 1 == sums.size() ? kInf : 0.5 * (hi_proj[run.last] + lo_proj[run.last + 1]);
      return Witness{s};
    });
  }
}

}  // namespace

std::vector<MergedAtom> merge_atoms(const std::vector<Atom>& f, const std::vector<Atom>& g,
                                    double tol, bool sorted_1d) {
  std::vector<MergedAtom> out;
  out.reserve(f.size() + g.size());
  if (sorted_1d) {
    std::size_t i = 0, j = 0;
    while (i < f.size() || j < g.size()) {
      if (j == g.size() || (i < f.size() && f[i].x[0] < g[j].x[0] - tol)) {
        out.push_back({f[i].x, f[i].mass, 0.0});
        ++i;
      } else if (i == f.size() || g[j].x[0] < f[i].x[0] - tol) {
        out.push_back({g[j].x, 0.0, g[j].mass});
        ++j;
      } else {
        out.push_back({f[i].x, f[i].mass, g[j].mass});
        ++i;
        ++j;
      }
    }
    return out;
  }
  struct Tagged {
    Point x;
    double mass;
    bool from_f;
  };
  std::vector<Tagged> all;
  all.reserve(f.size() + g.size());
  for (const auto& a : f) all.push_back({a.x, a.mass, true});
  for (const auto& a : g) all.push_back({a.x, a.mass, false});
  std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.x[0] < b.x[0]; });
  // Columns: chains of x[0] within tol; then rows inside each column.
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i + 1;
    while (j < all.size() && all[j].x[0] - all[j - 1].x[0] <= tol) ++j;
    std::sort(all.begin() + static_cast<std::ptrdiff_t>(i), all.begin() + static_cast<std::ptrdiff_t>(j),
              [](const Tagged& a, const Tagged& b) { return a.x[1] < b.x[1]; });
    for (std::size_t k = i; k < j;) {
      MergedAtom m{all[k].x, 0.0, 0.0};
      std::size_t l = k;
      while (l < j && all[l].x[1] - all[k].x[1] <= tol) {
        (all[l].from_f ? m.f : m.g) += all[l].mass;
        ++l;
      }
      out.push_back(m);
      k = l;
    }
    i = j;
  }
  return out;
}

double evaluate_witness(const Witness& w, const LatticeMeasure& f, const LatticeMeasure& g) {
  return evaluate(w, f.atoms(), g.atoms(), coordinate_tolerance(f, g));
}

double evaluate_witness(const Witness& w, const FiniteMeasure& f, const FiniteMeasure& g) {
  const auto fa = f.atoms();
  const auto ga = g.atoms();
  return evaluate(w, fa, ga, finite_tolerance(fa, ga));
}

DistanceReport kolmogorov(const LatticeMeasure& f, const LatticeMeasure& g) {
  require_line(f, g, "Kolmogorov distance");
  const auto atoms = merged(f, g);
  // After each atom the running difference is F(x) - G(x); before it, the
  // left limits F(x-) - G(x-) are the previous running value.
  double diff = 0.0;
  double best = 0.0;
  std::size_t at = atoms.size();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    diff += atoms[i].f - atoms[i].g;
    if (std::abs(diff) > best) best = std::abs(diff), at = i;
  }
  IntervalSet half_line{-kInf, 0.0, false, true};
  if (at == atoms.size()) {
    half_line.hi = atoms.empty() ? 0.0 : atoms.front().x[0];
    half_line.hi_closed = false;
  } else {
    half_line.hi = atoms[at].x[0];
  }
  return DistanceReport{best, DistanceKind::kExact, Witness{half_line}};
}

DistanceReport total_variation(const LatticeMeasure& f, const LatticeMeasure& g) {
  return total_variation_of(merged(f, g));
}

DistanceReport total_variation(const FiniteMeasure& f, const FiniteMeasure& g) {
  if (f.dim() != g.dim()) throw InvalidInput("measures have different dimensions");
  const auto fa = f.atoms();
  const auto ga = g.atoms();
  return total_variation_of(merge_atoms(fa, ga, finite_tolerance(fa, ga)));
}

DistanceReport convex_1d(const LatticeMeasure& f, const LatticeMeasure& g) {
  require_line(f, g, "interval distance");
  // An interval of any type meets the atoms in a contiguous run, and the
  // closed interval spanning a run's end atoms meets exactly that run, so
  // the sup over all intervals is the extreme contiguous signed sum.
  const auto atoms = merged(f, g);
  std::vector<double> d(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) d[i] = atoms[i].f - atoms[i].g;
  const auto [mx, mn] = extreme_runs(d);
  const Run& run = mx.sum >= -mn.sum ? mx : mn;
  DistanceReport r{std::abs(run.sum), DistanceKind::kExact, std::nullopt};
  if (r.value > 0.0) {
    r.witness = IntervalSet{atoms[run.first].x[0], atoms[run.last].x[0], true, true};
  } else {
    r.witness = IntervalSet{0.0, 0.0, false, false};
  }
  return r;
}

DistanceReport convex_2d_lower(const LatticeMeasure& f, const LatticeMeasure& g, int samples,
                               std::uint64_t seed, const Convex2dOptions& options) {
  if (f.dim() != 2 || g.dim() != 2) {
    throw InvalidInput("convex_2d_lower needs two-dimensional measures");
  }
  if (samples < 0) throw InvalidInput("samples must be nonnegative");
  std::vector<SignedPoint> pts;
  double scale = 1.0;
  for (const auto& a : merged(f, g)) {
    if (a.f != a.g) {
      pts.push_back({a.x, a.f - a.g});
      scale = std::max({scale, std::abs(a.x[0]), std::abs(a.x[1])});
    }
  }
  Candidate best;
  best.witness = Witness{AtomSet{}};
  if (pts.empty()) return DistanceReport{0.0, DistanceKind::kLowerBound, best.witness};
  if (pts.size() > options.max_points) {
    throw ResourceError("convex_2d point budget", options.max_points, pts.size());
  }

  for (const auto& p : pts) best.offer(std::abs(p.d), [&] { return Witness{Polygon{{p.x}}}; });

  // Hull of the atoms where one measure dominates.
  for (double sign : {1.0, -1.0}) {
    std::vector<Point> side;
    for (const auto& p : pts) {
      if (sign * p.d > 0.0) side.push_back(p.x);
    }
    if (side.empty()) continue;
    auto hull = convex_hull(std::move(side));
    double value = 0.0;
    for (const auto& p : pts) {
      if (in_polygon(hull, p.x, 1e-9 * scale)) value += sign * p.d;
    }
    best.offer(value, [&] { return Witness{Polygon{hull}}; });
  }

  // Strip families only change at directions orthogonal to a difference of
  // two points. Evaluate at each such direction (ties grouped, which yields
  // strips that are lines) and inside each open arc between them.
  std::vector<double> angles;
  angles.reserve(pts.size() * (pts.size() - 1) / 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double a = std::atan2(pts[j].x[1] - pts[i].x[1], pts[j].x[0] - pts[i].x[0]) +
                 std::numbers::pi / 2.0;
      a = std::fmod(a, std::numbers::pi);
      if (a < 0.0) a += std::numbers::pi;
      angles.push_back(a);
    }
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return b - a <= 1e-12; }),
               angles.end());
  if (angles.empty()) angles.push_back(0.0);
  const double tie_tol = 1e-9 * scale;
  std::vector<std::pair<double, double>> scratch;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double next = i + 1 < angles.size() ? angles[i + 1] : angles.front() + std::numbers::pi;
    for (double a : {angles[i], 0.5 * (angles[i] + next)}) {
      best_strip(pts, {std::cos(a), std::sin(a)}, tie_tol, scratch, best);
    }
  }

  // Greedy polygons: each sample draws its direction set up front so the
  // first k samples are the same for every `samples` >= k.
  std::mt19937_64 rng(seed);
  auto uniform_angle = [&] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi;
  };
  std::vector<std::size_t> members;
  for (int s = 0; s < samples; ++s) {
    const int count = 3 + static_cast<int>(rng() % 6);
    std::vector<Point> dirs;
    for (int t = 0; t < count; ++t) {
      const double a = uniform_angle();
      dirs.push_back({std::cos(a), std::sin(a)});
    }
    for (double sign : {1.0, -1.0}) {
      members.resize(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) members[i] = i;
      for (const Point& u : dirs) {
        auto proj = [&](std::size_t i) { return u[0] * pts[i].x[0] + u[1] * pts[i].x[1]; };
        std::sort(members.begin(), members.end(),
                  [&](std::size_t a, std::size_t b) { return proj(a) < proj(b); });
        // Keep the prefix { u.x <= c } with the largest signed mass; cuts
        // only between distinct projections.
        double run = 0.0;
        double top = -kInf;
        std::size_t keep = members.size();
        for (std::size_t i = 0; i < members.size(); ++i) {
          run += sign * pts[members[i]].d;
          const bool boundary =
              i + 1 == members.size() || proj(members[i + 1]) - proj(members[i]) > tie_tol;
          if (boundary && run > top) top = run, keep = i + 1;
        }
        members.resize(keep);
      }
      double value = 0.0;
      for (std::size_t i : members) value += sign * pts[i].d;
      best.offer(value, [&] {
        Polygon poly;
        for (std::size_t i : members) poly.vertices.push_back(pts[i].x);
        poly.vertices = convex_hull(std::move(poly.vertices));
        return Witness{poly};
      });
    }
  }
  return DistanceReport{best.value, DistanceKind::kLowerBound, best.witness};
}

double concentration(const LatticeMeasure& f, double lambda) {
  if (f.dim() != 1) throw InvalidInput("concentration function is one-dimensional");
  if (!(lambda >= 0.0)) throw InvalidInput("window length must be nonnegative");
  const auto atoms = f.atoms();
  const double tol = 1e-9 * f.step(0);
  double window = 0.0;
  double best = 0.0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < atoms.size(); ++hi) {
    window += atoms[hi].mass;
    while (atoms[hi].x[0] - atoms[lo].x[0] > lambda + tol) window -= atoms[lo++].mass;
    best = std::max(best, window);
  }
  return best;
}

double quantile(const LatticeMeasure& f, double q) {
  if (f.dim() != 1) throw InvalidInput("quantiles are one-dimensional");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("quantile level must lie in [0, 1]");
  const auto atoms = f.atoms();
  std::vector<double> above(atoms.size() + 1, 0.0);
  for (std::size_t i = atoms.size(); i-- > 0;) above[i] = above[i + 1] + atoms[i].mass;
  const double total = above.front();
  double below = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (below / total <= q + kMassTolerance && above[i + 1] / total <= 1.0 - q + kMassTolerance) {
      return atoms[i].x[0];
    }
    below += atoms[i].mass;
  }
  return atoms.back().x[0];
}

QuantileCheck check_quantile(const LatticeMeasure& f, double a, double q) {
  if (f.dim() != 1) throw InvalidInput("quantiles are one-dimensional");
  const double tol = 1e-9 * f.step(0);
  QuantileCheck c{0.0, 0.0, false, false};
  double total = 0.0;
  for (const auto& atom : f.atoms()) {
    total += atom.mass;
    if (atom.x[0] < a - tol) c.mass_below += atom.mass;
    if (atom.x[0] > a + tol) c.mass_above += atom.mass;
  }
  c.mass_below /= total;
  c.mass_above /= total;
  c.below_ok = c.mass_below <= q + kMassTolerance;
  c.above_ok = c.mass_above <= 1.0 - q + kMassTolerance;
  return c;
}

}  // namespace convdist
