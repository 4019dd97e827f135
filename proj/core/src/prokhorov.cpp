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

#include "convdist/prokhorov.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "convdist/error.hpp"
#include "convdist/max_flow.hpp"

namespace convdist {
namespace {

constexpr int kMaxDyadicExponent = 60;
constexpr double kFloatFlowEpsilon = 1e-15;
constexpr double kFeasibilitySlack = 1e-12;

struct Support {
  std::vector<Point> points;
  std::vector<double> masses;
};

Support support_of(const FiniteMeasure& m) {
  Support s;
  for (const auto& a : m.atoms()) {
    s.points.push_back(a.x);
    s.masses.push_back(a.mass);
  }
  return s;
}

// Smallest K such that every mass times 2^K is an integer and the scaled
// totals stay well inside int64.
std::optional<int> dyadic_exponent(const Support& a, const Support& b) {
  int k = 0;
  for (const auto* s : {&a, &b}) {
    for (double m : s->masses) {
      int e = 0;
      while (e <= kMaxDyadicExponent) {
        const double scaled = std::ldexp(m, e);
        if (scaled == std::floor(scaled)) break;
        ++e;
      }
      if (e > kMaxDyadicExponent) return std::nullopt;
      k = std::max(k, e);
    }
  }
  return k;
}

struct Solve {
  double deficiency;
  std::vector<CouplingEntry> flows;  // matched mass on admissible pairs
};

template <typename Cap>
Solve solve_at(const Support& f, const Support& g, const std::vector<double>& dist,
               const std::vector<Cap>& fa, const std::vector<Cap>& gb, double radius,
               int exponent) {
  const std::size_t m1 = f.points.size();
  const std::size_t m2 = g.points.size();
  const std::size_t source = m1 + m2;
  const std::size_t sink = source + 1;
  FlowNetwork<Cap> net(m1 + m2 + 2, std::is_same_v<Cap, double> ? kFloatFlowEpsilon : Cap{0});
  Cap total_f{0}, total_g{0};
  for (std::size_t i = 0; i < m1; ++i) {
    net.add_edge(source, i, fa[i]);
    total_f += fa[i];
  }
  for (std::size_t j = 0; j < m2; ++j) {
    net.add_edge(m1 + j, sink, gb[j]);
    total_g += gb[j];
  }
  std::vector<std::pair<std::size_t, std::size_t>> pair_edges;  // (edge id, flat pair)
  for (std::size_t i = 0; i < m1; ++i) {
    for (std::size_t j = 0; j < m2; ++j) {
      if (dist[i * m2 + j] <= radius) {
        pair_edges.emplace_back(net.add_edge(i, m1 + j, fa[i]), i * m2 + j);
      }
    }
  }
  const Cap flow = net.max_flow(source, sink);
  auto to_mass = [&](Cap c) {
    if constexpr (std::is_same_v<Cap, double>) {
      return c;
    } else {
      return std::ldexp(static_cast<double>(c), -exponent);
    }
  };
  Solve out;
  out.deficiency = to_mass(std::max(total_f, total_g) - flow);
  if constexpr (std::is_same_v<Cap, double>) {
    if (out.deficiency < kFeasibilitySlack) out.deficiency = 0.0;
  }
  for (const auto& [edge, flat] : pair_edges) {
    const Cap c = net.flow(edge);
    if (c > Cap{0}) out.flows.push_back({flat / m2, flat % m2, to_mass(c)});
  }
  return out;
}

// Completes a partial matching to a coupling by pairing the unmatched
// masses in north-west-corner order.
CouplingPlan complete_plan(const Support& f, const Support& g,
                           const std::vector<CouplingEntry>& flows) {
  std::vector<double> row_left = f.masses;
  std::vector<double> col_left = g.masses;
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  for (const auto& e : flows) {
    joint[{e.row, e.col}] += e.mass;
    row_left[e.row] -= e.mass;
    col_left[e.col] -= e.mass;
  }
  std::size_t i = 0, j = 0;
  while (i < row_left.size() && j < col_left.size()) {
    if (row_left[i] <= 0.0) {
      ++i;
      continue;
    }
    if (col_left[j] <= 0.0) {
      ++j;
      continue;
    }
    const double t = std::min(row_left[i], col_left[j]);
    joint[{i, j}] += t;
    row_left[i] -= t;
    col_left[j] -= t;
  }
  CouplingPlan plan{f.points, g.points, {}};
  for (const auto& [key, mass] : joint) {
    if (mass > 0.0) plan.joint.push_back({key.first, key.second, mass});
  }
  return plan;
}

std::vector<double> candidate_radii(const std::vector<double>& dist) {
  std::vector<double> radii{0.0};
  for (double d : dist) {
    if (d <= 1.0) radii.push_back(d);
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

}  // namespace

std::vector<double> CouplingPlan::row_sums() const {
  std::vector<double> s(row_points.size(), 0.0);
  for (const auto& e : joint) s[e.row] += e.mass;
  return s;
}

std::vector<double> CouplingPlan::col_sums() const {
  std::vector<double> s(col_points.size(), 0.0);
  for (const auto& e : joint) s[e.col] += e.mass;
  return s;
}

double distance(const Point& a, const Point& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

ProkhorovResult prokhorov_exact(const FiniteMeasure& f, const FiniteMeasure& g,
                                const ProkhorovOptions& options) {
  if (f.dim() != g.dim()) throw InvalidInput("measures have different dimensions");
  const Support fs = support_of(f);
  const Support gs = support_of(g);
  for (std::size_t n : {fs.points.size(), gs.points.size()}) {
    if (n > options.max_points) throw ResourceError("Prokhorov point budget", options.max_points, n);
  }
  const std::size_t m2 = gs.points.size();
  std::vector<double> dist(fs.points.size() * m2);
  for (std::size_t i = 0; i < fs.points.size(); ++i) {
    for (std::size_t j = 0; j < m2; ++j) dist[i * m2 + j] = distance(fs.points[i], gs.points[j]);
  }
  const std::vector<double> radii = candidate_radii(dist);

  const std::optional<int> exponent = dyadic_exponent(fs, gs);
  std::vector<std::int64_t> fa_int, gb_int;
  if (exponent) {
    for (double m : fs.masses) fa_int.push_back(static_cast<std::int64_t>(std::ldexp(m, *exponent)));
    for (double m : gs.masses) gb_int.push_back(static_cast<std::int64_t>(std::ldexp(m, *exponent)));
  }
  std::map<std::size_t, Solve> solved;
  auto at = [&](std::size_t k) -> const Solve& {
    auto it = solved.find(k);
    if (it == solved.end()) {
      Solve s = exponent ? solve_at(fs, gs, dist, fa_int, gb_int, radii[k], *exponent)
                         : solve_at(fs, gs, dist, fs.masses, gs.masses, radii[k], 0);
      it = solved.emplace(k, std::move(s)).first;
    }
    return it->second;
  };
  auto score = [&](std::size_t k) { return std::max(radii[k], at(k).deficiency); };

  std::size_t best = radii.size() - 1;
  if (options.full_curve) {
    for (std::size_t k = 0; k < radii.size(); ++k) {
      if (score(k) < score(best)) best = k;
    }
  } else if (at(best).deficiency <= radii[best]) {
    // First breakpoint where the curve drops below the diagonal; the
    // minimum of max(r, def(r)) sits there or one step earlier.
    std::size_t lo = 0, hi = best;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (at(mid).deficiency <= radii[mid]) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    best = lo;
    if (lo > 0 && score(lo - 1) < score(lo)) best = lo - 1;
  }

  ProkhorovResult result;
  result.epsilon = std::min(1.0, score(best));
  result.plan_radius = radii[best];
  result.integer_flow = exponent.has_value();
  result.plan = complete_plan(fs, gs, at(best).flows);
  for (const auto& [k, s] : solved) result.deficiency_curve.push_back({radii[k], s.deficiency});
  return result;
}

double prokhorov_bruteforce(const FiniteMeasure& f, const FiniteMeasure& g) {
  if (f.dim() != g.dim()) throw InvalidInput("measures have different dimensions");
  const Support fs = support_of(f);
  const Support gs = support_of(g);
  const std::size_t m1 = fs.points.size();
  const std::size_t m2 = gs.points.size();
  if (m1 + m2 > 16) {
    throw InvalidInput("brute-force Prokhorov oracle needs at most 16 support points, got " +
                       std::to_string(m1 + m2));
  }
  auto subset_masses = [](const std::vector<double>& masses) {
    std::vector<double> out(std::size_t{1} << masses.size(), 0.0);
    for (std::size_t mask = 1; mask < out.size(); ++mask) {
      const auto low = static_cast<std::size_t>(std::countr_zero(mask));
      out[mask] = out[mask & (mask - 1)] + masses[low];
    }
    return out;
  };
  const auto f_of = subset_masses(fs.masses);
  const auto g_of = subset_masses(gs.masses);

  std::vector<double> dist;
  for (const auto& x : fs.points) {
    for (const auto& y : gs.points) dist.push_back(distance(x, y));
  }
  // Largest excess of a set's mass over the other measure's mass on the
  // closed r-neighbourhood of that set, over all subsets of the support.
  auto excess = [](const std::vector<double>& own, const std::vector<double>& other,
                   const std::vector<std::uint32_t>& reach) {
    std::vector<std::uint32_t> hood(own.size(), 0);
    double worst = 0.0;
    for (std::size_t mask = 1; mask < own.size(); ++mask) {
      const auto low = static_cast<std::size_t>(std::countr_zero(mask));
      hood[mask] = hood[mask & (mask - 1)] | reach[low];
      worst = std::max(worst, own[mask] - other[hood[mask]]);
    }
    return worst;
  };
  double best = 1.0;
  for (double r : candidate_radii(dist)) {
    std::vector<std::uint32_t> reach_f(m1, 0), reach_g(m2, 0);
    for (std::size_t i = 0; i < m1; ++i) {
      for (std::size_t j = 0; j < m2; ++j) {
        if (dist[i * m2 + j] <= r) {
          reach_f[i] |= std::uint32_t{1} << j;
          reach_g[j] |= std::uint32_t{1} << i;
        }
      }
    }
    const double s = std::max(excess(f_of, g_of, reach_f), excess(g_of, f_of, reach_g));
    best = std::min(best, std::max(r, s));
  }
  return best;
}

CouplingCheck coupling_check(const CouplingPlan& plan, double epsilon) {
  double exceed = 0.0;
  for (const auto& e : plan.joint) {
    if (distance(plan.row_points[e.row], plan.col_points[e.col]) > epsilon) exceed += e.mass;
  }
  return CouplingCheck{exceed, exceed <= epsilon + 1e-10};
}

CouplingPlan product_plan(const FiniteMeasure& f, const FiniteMeasure& g) {
  const Support fs = support_of(f);
  const Support gs = support_of(g);
  CouplingPlan plan{fs.points, gs.points, {}};
  for (std::size_t i = 0; i < fs.points.size(); ++i) {
    for (std::size_t j = 0; j < gs.points.size(); ++j) {
      plan.joint.push_back({i, j, fs.masses[i] * gs.masses[j]});
    }
  }
  return plan;
}

ScalingTransfer scaling_transfer(const FiniteMeasure& f, const FiniteMeasure& g, double a,
                                 double b, const ProkhorovOptions& options) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("scaling factors must be positive");
  const double lhs = prokhorov_exact(rescale(f, b), rescale(g, b), options).epsilon;
  const double at_a = prokhorov_exact(rescale(f, a), rescale(g, a), options).epsilon;
  return ScalingTransfer{lhs, std::max(std::sqrt(a / b), 1.0) * at_a};
}

}  // namespace convdist
