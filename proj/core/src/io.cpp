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

#include "convdist/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "convdist/error.hpp"

namespace convdist {
namespace {

using nlohmann::json;

json point_json(const Point& x, int dim) {
  return dim == 1 ? json::array({x[0]}) : json::array({x[0], x[1]});
}

std::array<double, 2> pair_field(const json& j, const char* key, int dim) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != static_cast<std::size_t>(dim)) {
    throw InvalidInput(std::string("measure field '") + key + "' must be an array of length " +
                       std::to_string(dim));
  }
  std::array<double, 2> out{0.0, 0.0};
  for (int i = 0; i < dim; ++i) out[i] = j[key][i].get<double>();
  return out;
}

double approximate_gcd(double a, double b, double tol) {
  while (b > tol) {
    double r = std::fmod(a, b);
    if (b - r <= tol) r = 0.0;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

MeasureFile measure_from_json(const json& j) {
  try {
    if (j.contains("points")) {
      const auto& pts = j.at("points");
      const auto& ms = j.at("masses");
      if (!pts.is_array() || pts.empty()) throw InvalidInput("'points' must be a nonempty array");
      const auto dim = static_cast<int>(pts[0].size());
      std::vector<Point> points;
      for (const auto& p : pts) {
        if (p.size() != static_cast<std::size_t>(dim)) {
          throw InvalidInput("all points must have the same dimension");
        }
        points.push_back({p[0].get<double>(), dim == 2 ? p[1].get<double>() : 0.0});
      }
      return FiniteMeasure(dim, std::move(points), ms.get<std::vector<double>>());
    }
    const int dim = j.at("dim").get<int>();
    if (dim != 1 && dim != 2) throw InvalidInput("'dim' must be 1 or 2");
    const auto step = pair_field(j, "step", dim);
    const auto offset = pair_field(j, "offset", dim);
    const auto& ms = j.at("masses");
    if (!ms.is_array() || ms.empty()) throw InvalidInput("'masses' must be a nonempty array");
    std::vector<double> masses;
    std::array<std::size_t, 2> extent{0, 1};
    if (dim == 1) {
      const json& row = ms[0].is_array() ? ms[0] : ms;
      if (ms[0].is_array() && ms.size() != 1) {
        throw InvalidInput("one-dimensional 'masses' must be a single row");
      }
      masses = row.get<std::vector<double>>();
      extent[0] = masses.size();
    } else {
      extent = {ms.size(), ms[0].size()};
      for (const auto& row : ms) {
        if (row.size() != extent[1]) throw InvalidInput("2D 'masses' rows must have equal length");
        for (const auto& v : row) masses.push_back(v.get<double>());
      }
    }
    return LatticeMeasure::probability(dim, step, offset, extent, std::move(masses));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed measure JSON: ") + e.what());
  }
}

MeasureFile read_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open measure file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput("cannot parse '" + path + "': " + e.what());
  }
  return measure_from_json(j);
}

LatticeMeasure lattice_from_points(const FiniteMeasure& f, std::size_t cell_budget) {
  std::array<double, 2> step{1.0, 1.0};
  Point origin{0.0, 0.0};
  std::array<std::size_t, 2> extent{1, 1};
  for (int axis = 0; axis < f.dim(); ++axis) {
    std::vector<double> xs;
    for (const auto& p : f.points()) xs.push_back(p[axis]);
    std::sort(xs.begin(), xs.end());
    const double lo = xs.front();
    const double span = xs.back() - lo;
    origin[axis] = lo;
    if (span == 0.0) continue;
    const double tol = 1e-9 * span;
    double g = 0.0;
    for (double x : xs) {
      const double d = x - lo;
      if (d > tol) g = g == 0.0 ? d : approximate_gcd(std::max(g, d), std::min(g, d), tol);
    }
    for (double x : xs) {
      const double units = (x - lo) / g;
      if (std::abs(units - std::round(units)) > 1e-6) {
        throw InvalidInput("point coordinates do not lie on a common grid");
      }
    }
    const double cells = std::round(span / g) + 1.0;
    if (cells > static_cast<double>(cell_budget)) {
      throw ResourceError("cell budget", cell_budget, static_cast<std::size_t>(cells));
    }
    step[axis] = g;
    extent[axis] = static_cast<std::size_t>(cells);
  }
  if (extent[0] * extent[1] > cell_budget) {
    throw ResourceError("cell budget", cell_budget, extent[0] * extent[1]);
  }
  std::vector<double> masses(extent[0] * extent[1], 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto i = static_cast<std::size_t>(std::llround((f.points()[k][0] - origin[0]) / step[0]));
    const auto j = f.dim() == 2
                       ? static_cast<std::size_t>(std::llround((f.points()[k][1] - origin[1]) / step[1]))
                       : std::size_t{0};
    masses[i * extent[1] + j] += f.masses()[k];
  }
  return LatticeMeasure::probability(f.dim(), step, origin, extent, std::move(masses));
}

json to_json(const LatticeMeasure& m) {
  json j;
  j["dim"] = m.dim();
  j["step"] = m.dim() == 1 ? json::array({m.step(0)}) : json::array({m.step(0), m.step(1)});
  j["offset"] = m.dim() == 1 ? json::array({m.offset(0)}) : json::array({m.offset(0), m.offset(1)});
  json rows = json::array();
  for (std::size_t i = 0; i < m.extent(0); ++i) {
    if (m.dim() == 1) {
      rows.push_back(m.mass(i));
    } else {
      json row = json::array();
      for (std::size_t c = 0; c < m.extent(1); ++c) row.push_back(m.mass(i, c));
      rows.push_back(std::move(row));
    }
  }
  j["masses"] = m.dim() == 1 ? json::array({rows}) : rows;
  return j;
}

json to_json(const FiniteMeasure& m) {
  json pts = json::array();
  for (const auto& p : m.points()) pts.push_back(point_json(p, m.dim()));
  return json{{"points", pts}, {"masses", m.masses()}};
}

json to_json(const Witness& w) {
  // JSON has no infinities; unbounded sides are null.
  auto bound = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return std::visit(
      [&](const auto& set) -> json {
        using T = std::decay_t<decltype(set)>;
        if constexpr (std::is_same_v<T, IntervalSet>) {
          return {{"type", "interval"},
                  {"lo", bound(set.lo)},
                  {"hi", bound(set.hi)},
                  {"lo_closed", set.lo_closed},
                  {"hi_closed", set.hi_closed}};
        } else if constexpr (std::is_same_v<T, AtomSet>) {
          json pts = json::array();
          for (const auto& p : set.points) pts.push_back({p[0], p[1]});
          return {{"type", "atoms"}, {"points", pts}};
        } else if constexpr (std::is_same_v<T, Strip>) {
          return {{"type", "strip"},
                  {"normal", {set.normal[0], set.normal[1]}},
                  {"lo", bound(set.lo)},
                  {"hi", bound(set.hi)}};
        } else {
          json pts = json::array();
          for (const auto& p : set.vertices) pts.push_back({p[0], p[1]});
          return {{"type", "polygon"}, {"vertices", pts}};
        }
      },
      w);
}

json to_json(const DistanceReport& r) {
  return {{"value", r.value},
          {"kind", r.kind == DistanceKind::kExact ? "exact" : "lower_bound"},
          {"witness", r.witness ? to_json(*r.witness) : json(nullptr)}};
}

json to_json(const CouplingPlan& p) {
  json rows = json::array();
  json cols = json::array();
  for (const auto& x : p.row_points) rows.push_back({x[0], x[1]});
  for (const auto& x : p.col_points) cols.push_back({x[0], x[1]});
  json joint = json::array();
  for (const auto& e : p.joint) joint.push_back({e.row, e.col, e.mass});
  return {{"row_points", rows}, {"col_points", cols}, {"joint", joint}};
}

json to_json(const ProkhorovResult& r) {
  json curve = json::array();
  for (const auto& c : r.deficiency_curve) curve.push_back({c.radius, c.deficiency});
  return {{"epsilon", r.epsilon},
          {"deficiency_curve", curve},
          {"plan_radius", r.plan_radius},
          {"integer_flow", r.integer_flow},
          {"plan", to_json(r.plan)}};
}

}  // namespace convdist
