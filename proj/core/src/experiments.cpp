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

#include "convdist/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "convdist/binomial.hpp"
#include "convdist/error.hpp"
#include "convdist/gaussian.hpp"
#include "convdist/io.hpp"
#include "convdist/metrics.hpp"
#include "convdist/prokhorov.hpp"

namespace convdist::harness {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

constexpr double kPlateauSlack = 1e-12;
constexpr double kCouplingMarginalTolerance = 1e-10;
constexpr double kIdentityTolerance = 1e-12;
constexpr double kTriangleSlack = 1e-10;
constexpr double kPointMassTolerance = 1e-12;

std::size_t checked_cells(std::array<std::size_t, 2> extent, int dim, std::size_t budget) {
  const double cells = static_cast<double>(extent[0]) * (dim == 2 ? double(extent[1]) : 1.0);
  if (cells > static_cast<double>(budget)) {
    throw ResourceError("cell budget", budget,
                        cells >= 1e19 ? std::numeric_limits<std::size_t>::max()
                                      : static_cast<std::size_t>(cells));
  }
  return static_cast<std::size_t>(cells);
}

// Predicted extent of F^n.
std::array<std::size_t, 2> power_extent(const LatticeMeasure& f, std::int64_t n) {
  std::array<std::size_t, 2> e{1, 1};
  for (int axis = 0; axis < f.dim(); ++axis) {
    const double v = 1.0 + double(n) * double(f.extent(axis) - 1);
    e[axis] = v >= 1e18 ? std::size_t{1} << 62 : static_cast<std::size_t>(v);
  }
  return e;
}

// F^n for increasing n, reusing the previous power.
class PowerWalker {
 public:
  PowerWalker(LatticeMeasure f, std::size_t budget)
      : base_(f.trimmed()), current_(base_), n_(1), budget_(budget) {}

  const LatticeMeasure& at(std::int64_t n) {
    if (n < n_) {
      current_ = base_;
      n_ = 1;
    }
    if (n > n_) {
      checked_cells(power_extent(base_, n), base_.dim(), budget_);
      const std::int64_t delta = n - n_;
      current_ = convolve(current_, delta == 1 ? base_ : power(base_, delta, budget_));
      n_ = n;
    }
    return current_;
  }

  LatticeMeasure next(std::int64_t k = 1) const {
    checked_cells(power_extent(base_, n_ + k), base_.dim(), budget_);
    return convolve(current_, k == 1 ? base_ : power(base_, k, budget_));
  }

 private:
  LatticeMeasure base_;
  LatticeMeasure current_;
  std::int64_t n_;
  std::size_t budget_;
};

std::vector<std::int64_t> sorted_grid(std::vector<std::int64_t> grid) {
  for (auto n : grid) {
    if (n < 1) throw InvalidInput("grid values must be positive, got " + std::to_string(n));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// Powers of two up to `cap`, keeping F^{n + lookahead} inside the budget.
std::vector<std::int64_t> default_grid(const LatticeMeasure& f, const RunConfig& cfg,
                                       std::int64_t cap, std::int64_t lookahead) {
  std::vector<std::int64_t> grid;
  for (std::int64_t n = 1; n <= cap; n *= 2) {
    const auto e = power_extent(f, n + lookahead);
    const double cells = double(e[0]) * (f.dim() == 2 ? double(e[1]) : 1.0);
    if (cells > double(cfg.cell_budget)) break;
    grid.push_back(n);
  }
  if (grid.empty()) grid.push_back(1);
  return grid;
}

std::vector<std::int64_t> grid_for(const LatticeMeasure& f, const RunConfig& cfg,
                                   std::int64_t cap, std::int64_t lookahead = 1) {
  if (!cfg.n_grid.empty()) return sorted_grid(cfg.n_grid);
  return default_grid(f, cfg, cap, lookahead);
}

std::vector<std::int64_t> plain_grid(const RunConfig& cfg, std::int64_t cap) {
  if (!cfg.n_grid.empty()) return sorted_grid(cfg.n_grid);
  std::vector<std::int64_t> grid;
  for (std::int64_t n = 1; n <= cap; n *= 2) grid.push_back(n);
  return grid;
}

ExperimentReport start(const std::string& experiment, const std::string& id,
                       const RunConfig& cfg) {
  ExperimentReport r;
  r.experiment = experiment;
  r.id = id;
  r.metadata["seed"] = cfg.seed;
  r.metadata["cell_budget"] = cfg.cell_budget;
  r.metadata["point_budget"] = cfg.point_budget;
  r.metadata["prune"] = cfg.prune;
  r.metadata["tolerances"] = {{"plateau_slack", kPlateauSlack},
                              {"identity", kIdentityTolerance},
                              {"triangle", kTriangleSlack},
                              {"coupling_marginal", kCouplingMarginalTolerance},
                              {"point_mass", kPointMassTolerance}};
  r.metadata["notes"] = json::array();
  return r;
}

void note(ExperimentReport& r, const std::string& text) { r.metadata["notes"].push_back(text); }

template <typename F>
void run_rows(ExperimentReport& r, const std::vector<std::int64_t>& grid, F&& compute) {
  const auto t0 = Clock::now();
  for (const auto n : grid) {
    Row row;
    row.n = n;
    try {
      compute(row);
    } catch (const ResourceError& e) {
      row.raw = std::numeric_limits<double>::quiet_NaN();
      row.scaled = row.raw;
      row.bound.reset();
      row.pass = false;
      row.error = e.what();
    }
    r.rows.push_back(std::move(row));
  }
  r.metadata["wall_clock_seconds"] =
      std::chrono::duration<double>(Clock::now() - t0).count();
}

// Marks rows whose scaled value exceeds factor * reference, where the
// reference is the first computed row at or past plateau_from.
void apply_plateau(ExperimentReport& r, const RunConfig& cfg) {
  const Row* ref = nullptr;
  for (const auto& row : r.rows) {
    if (!row.error.empty()) continue;
    if (row.n >= cfg.plateau_from) {
      ref = &row;
      break;
    }
  }
  if (ref == nullptr) {
    for (const auto& row : r.rows) {
      if (row.error.empty()) {
        ref = &row;
        break;
      }
    }
  }
  if (ref == nullptr) return;
  const double limit = cfg.plateau_factor * ref->scaled + kPlateauSlack;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  // Rows before the reference are pre-asymptotic and not judged.
  for (auto& row : r.rows) {
    if (!row.error.empty() || row.n < ref->n) continue;
    row.pass = row.pass && row.scaled <= limit;
    lo = std::min(lo, row.scaled);
    hi = std::max(hi, row.scaled);
  }
  r.metadata["reference"] = {{"n", ref->n},
                             {"scaled", ref->scaled},
                             {"plateau_factor", cfg.plateau_factor},
                             {"limit", limit},
                             {"scaled_min", lo},
                             {"scaled_max", hi}};
}

const LatticeMeasure& require_1d(const NamedMeasure& f, const std::string& experiment) {
  if (f.measure.dim() != 1) {
    throw InvalidInput(experiment + " needs a one-dimensional measure, got " + f.id);
  }
  return f.measure;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse " + what + " '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw InvalidInput("cannot parse " + what + " '" + text + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse grid value '" + text + "'");
  }
  if (used != text.size()) throw InvalidInput("cannot parse grid value '" + text + "'");
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shortest %g form that reads back to the same double.
std::string short_fmt(double v) {
  char buf[40];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

double quantile_bound_constant() {
  return (1.0 + 2.0 * std::sqrt(2.0 * std::numbers::pi)) / std::exp(0.375);
}

bool ExperimentReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
}

NamedMeasure builtin_measure(const std::string& name) {
  if (name == "rademacher") return {name, LatticeMeasure::line(2.0, -1.0, {0.5, 0.5})};
  if (name == "uniform3") {
    return {name, LatticeMeasure::probability(1, {1.0, 1.0}, {-1.0, 0.0}, {3, 1},
                                              {1.0 / 3, 1.0 / 3, 1.0 / 3})};
  }
  if (name == "rademacher2d") {
    return {name, LatticeMeasure(2, {2.0, 2.0}, {-1.0, -1.0}, {2, 2}, {0.25, 0.25, 0.25, 0.25})};
  }
  auto arg = [&](const std::string& prefix) -> std::optional<std::string> {
    if (name.size() > prefix.size() + 2 && name.rfind(prefix + "(", 0) == 0 && name.back() == ')') {
      return name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
    }
    return std::nullopt;
  };
  if (auto p = arg("bernoulli")) {
    const double v = parse_double(*p, "bernoulli parameter");
    if (!(v > 0.0 && v < 1.0)) throw InvalidInput("bernoulli parameter must lie in (0, 1)");
    return {name, LatticeMeasure::line(1.0, 0.0, {1.0 - v, v})};
  }
  if (auto a = arg("point")) {
    const double v = parse_double(*a, "point location");
    return {name, LatticeMeasure::point_mass(1, {v, 0.0})};
  }
  throw InvalidInput("unknown measure '" + name +
                     "' (builtins: rademacher, uniform3, bernoulli(p), point(a), rademacher2d)");
}

NamedMeasure resolve_measure(const std::string& name_or_path, std::size_t cell_budget) {
  const bool looks_builtin = name_or_path == "rademacher" || name_or_path == "uniform3" ||
                             name_or_path == "rademacher2d" ||
                             name_or_path.rfind("bernoulli(", 0) == 0 ||
                             name_or_path.rfind("point(", 0) == 0;
  if (looks_builtin) return builtin_measure(name_or_path);
  auto m = read_measure_file(name_or_path);
  if (auto* lat = std::get_if<LatticeMeasure>(&m)) return {name_or_path, *lat};
  return {name_or_path, lattice_from_points(std::get<FiniteMeasure>(m), cell_budget)};
}

std::vector<std::int64_t> parse_grid(const std::string& text) {
  std::vector<std::int64_t> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3) throw InvalidInput("grid must be a:b or a:b:step");
    const auto a = parse_int(parts[0]);
    const auto b = parse_int(parts[1]);
    const auto step = parts.size() == 3 ? parse_int(parts[2]) : 1;
    if (a < 1 || b < a || step < 1) throw InvalidInput("grid a:b:step needs 1 <= a <= b, step >= 1");
    for (auto n = a; n <= b; n += step) out.push_back(n);
  } else {
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_int(part));
  }
  if (out.empty()) throw InvalidInput("empty grid");
  return sorted_grid(std::move(out));
}

ExperimentReport convex_rate(const NamedMeasure& f, const RunConfig& cfg) {
  auto r = start("theorem1", f.id, cfg);
  const bool two_d = f.measure.dim() == 2;
  const bool trivial = is_trivial(f.measure);
  PowerWalker walk(f.measure, cfg.cell_budget);
  r.metadata["distance"] = two_d ? "convex_2d_lower" : "convex_1d";
  r.metadata["samples"] = cfg.samples;
  if (two_d) note(r, "plane values are certified lower bounds on the convex-set distance");
  run_rows(r, grid_for(f.measure, cfg, two_d ? 16 : 4096), [&](Row& row) {
    const auto& a = walk.at(row.n);
    const auto b = walk.next();
    const auto d = two_d ? convex_2d_lower(a, b, cfg.samples, cfg.seed) : convex_1d(a, b);
    row.raw = d.value;
    row.scaled = std::sqrt(double(row.n)) * d.value;
    row.pass = trivial ? std::abs(d.value - 1.0) <= kIdentityTolerance : true;
    if (!two_d) row.extras["kolmogorov"] = kolmogorov(a, b).value;
    if (d.witness) row.extras["witness"] = to_json(*d.witness);
  });
  if (trivial) {
    note(r, "trivial measure: successive powers are disjoint point masses, distance 1");
  } else {
    apply_plateau(r, cfg);
  }
  return r;
}

ExperimentReport prokhorov_rate(const NamedMeasure& f, const RunConfig& cfg) {
  auto r = start("prokhorov-rate", f.id, cfg);
  const auto atoms = f.measure.atoms();
  const bool point_mass = atoms.size() == 1;
  const bool two_point_symmetric = atoms.size() == 2 && is_symmetric(f.measure);
  ProkhorovOptions opts;
  opts.max_points = cfg.point_budget;
  r.metadata["scaling"] = "sqrt(n)";
  run_rows(r, grid_for(f.measure, cfg, 256), [&](Row& row) {
    const auto fr = rescale(f.measure, double(row.n));
    checked_cells(power_extent(fr, row.n + 1), fr.dim(), cfg.cell_budget);
    const auto a = power(fr, row.n, cfg.cell_budget);
    const auto b = convolve(a, fr);
    const auto fa = to_finite(a, cfg.prune);
    const auto fb = to_finite(b, cfg.prune);
    const auto res = prokhorov_exact(fa.measure, fb.measure, opts);
    const auto chk = coupling_check(res.plan, res.epsilon);
    row.raw = res.epsilon;
    row.scaled = std::sqrt(double(row.n)) * res.epsilon;
    row.pass = chk.ok;
    row.extras["plan_radius"] = res.plan_radius;
    row.extras["exceed_mass"] = chk.exceed_mass;
    row.extras["dropped_mass"] = fa.dropped_mass + fb.dropped_mass;
    row.extras["integer_flow"] = res.integer_flow;
    if (point_mass) {
      const double loc = std::hypot(atoms[0].x[0], atoms[0].x[1]);
      const double expected = std::min(1.0, loc / std::sqrt(double(row.n)));
      row.bound = expected;
      row.extras["expected"] = expected;
      row.pass = row.pass && std::abs(res.epsilon - expected) <= kPointMassTolerance;
    }
  });
  if (point_mass) {
    note(r, "point mass at a: the distance is min(1, |a| / sqrt(n)); bound column holds it");
  } else if (!is_trivial(f.measure)) {
    apply_plateau(r, cfg);
    if (two_point_symmetric && r.metadata.contains("reference")) {
      // The rate is also attained from below: scaled stays within the band.
      const double floor = r.metadata["reference"]["scaled"].get<double>() / cfg.band_ratio;
      for (auto& row : r.rows) {
        if (row.error.empty() && row.n >= r.metadata["reference"]["n"].get<std::int64_t>()) row.pass = row.pass && row.scaled + kPlateauSlack >= floor;
      }
      r.metadata["reference"]["band_ratio"] = cfg.band_ratio;
      r.metadata["reference"]["lower_limit"] = floor;
    }
  }
  return r;
}

ExperimentReport skip_two(const NamedMeasure& f, const RunConfig& cfg) {
  const auto& m = require_1d(f, "skip-two");
  if (!is_symmetric(m)) throw InvalidInput("skip-two needs a symmetric measure; " + f.id + " is not");
  auto r = start("skip-two", f.id, cfg);
  r.metadata["scaling"] = "n";
  PowerWalker walk(m, cfg.cell_budget);
  run_rows(r, grid_for(m, cfg, 1024, 2), [&](Row& row) {
    const auto& a = walk.at(row.n);
    const auto b = walk.next(2);
    const auto d = kolmogorov(a, b);
    row.raw = d.value;
    row.scaled = double(row.n) * d.value;
    row.pass = true;
    if (d.witness) row.extras["witness"] = to_json(*d.witness);
  });
  if (!is_trivial(m)) apply_plateau(r, cfg);
  return r;
}

ExperimentReport quantile_bound(const NamedMeasure& f, double q, const RunConfig& cfg) {
  const auto& m = require_1d(f, "quantile-bound");
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("q must lie in (0, 1)");
  const auto chk = check_quantile(m, 0.0, q);
  if (!chk.below_ok) {
    throw InvalidInput("0 is not a q-quantile of " + f.id + ": F{(-inf, 0)} = " +
                       fmt(chk.mass_below) + " > q = " + fmt(q));
  }
  if (!chk.above_ok) {
    throw InvalidInput("0 is not a q-quantile of " + f.id + ": F{(0, inf)} = " +
                       fmt(chk.mass_above) + " > 1 - q = " + fmt(1.0 - q));
  }
  auto r = start("quantile-bound", f.id, cfg);
  const double c0 = quantile_bound_constant();
  const double qmin = std::min(q, 1.0 - q);
  const bool median = q == 0.5;
  r.metadata["q"] = q;
  r.metadata["c0"] = c0;
  PowerWalker walk(m, cfg.cell_budget);
  run_rows(r, grid_for(m, cfg, 1024), [&](Row& row) {
    const auto& a = walk.at(row.n);
    const double d = kolmogorov(a, walk.next()).value;
    const double bound = c0 / std::sqrt(double(row.n) * qmin);
    row.raw = d;
    row.scaled = std::sqrt(double(row.n)) * d;
    row.bound = bound;
    row.pass = d <= bound;
    if (median) {
      const double mb = c0 * std::sqrt(2.0) / std::sqrt(double(row.n));
      row.extras["median_bound"] = mb;
      row.pass = row.pass && d <= mb;
    }
  });
  return r;
}

ExperimentReport decomposition_path(const NamedMeasure& f, double radius, const RunConfig& cfg) {
  const auto& m = require_1d(f, "decomposition");
  const auto dec = decompose(m, radius);
  auto r = start("decomposition", f.id, cfg);
  r.metadata["radius"] = radius;
  r.metadata["p"] = dec.p;
  r.metadata["u_min_eigenvalue"] = dec.u_min_eigenvalue;
  note(r, "raw = rhoC(F^n, F^(n+1)); bound = 2 TV(B(n,p), B(n+1,p)) which must dominate "
          "rhoC(G_n, F^(n+1))");
  if (dec.u_min_eigenvalue <= kSingularEigenvalue) {
    note(r, "truncated part U is degenerate; the path exists but gives no rate");
  }
  PowerWalker walk(m, cfg.cell_budget);
  run_rows(r, grid_for(m, cfg, 1024), [&](Row& row) {
    const auto& a = walk.at(row.n);
    const auto b = walk.next();
    const auto g = interpolant(dec, row.n, 1e-15, cfg.cell_budget);
    const double d1 = convex_1d(a, g.measure).value;
    const double d2 = convex_1d(g.measure, b).value;
    const double direct = convex_1d(a, b).value;
    double tv = 0.0;
    double l1 = 0.0;
    if (dec.p > 0.0) {
      tv = binom_tv_identity(BinomialSpec(row.n, dec.p)).total_variation;
      const auto wn = binomial_weights(row.n, dec.p);
      const auto wn1 = binomial_weights(row.n + 1, dec.p);
      for (std::size_t k = 0; k < wn1.size(); ++k) {
        l1 += std::abs((k < wn.size() ? wn[k] : 0.0) - wn1[k]);
      }
    }
    const double bound = 2.0 * tv;
    const bool triangle = direct <= d1 + d2 + kTriangleSlack;
    const bool path = d2 <= bound + kTriangleSlack + g.dropped_mass;
    const bool weights = std::abs(l1 - bound) <= kIdentityTolerance;
    row.raw = direct;
    row.scaled = std::sqrt(double(row.n)) * direct;
    row.bound = bound;
    row.pass = triangle && path && weights;
    row.extras["d_first"] = d1;
    row.extras["d_second"] = d2;
    row.extras["dropped_mass"] = g.dropped_mass;
    row.extras["weight_l1"] = l1;
  });
  // Empirical constant for this radius: largest scaled value past plateau_from.
  double constant = 0.0;
  for (const auto& row : r.rows) {
    if (row.error.empty() && row.n >= cfg.plateau_from) constant = std::max(constant, row.scaled);
  }
  r.metadata["plateau_constant"] = constant;
  return r;
}

ExperimentReport coupling_demo(const NamedMeasure& f, const RunConfig& cfg) {
  auto r = start("coupling", f.id, cfg);
  const auto& m = f.measure;
  double reach = 0.0;
  for (const auto& a : m.atoms()) reach = std::max(reach, std::hypot(a.x[0], a.x[1]));
  const double naive_eps = reach + 1e-9 * std::max(1.0, reach);
  r.metadata["naive_radius"] = reach;
  note(r, "rows: xi ~ F^(n+1), columns: eta ~ F^n; bound = epsilon + 1e-10 caps exceed_mass");
  note(r, "naive coupling xi = eta + X puts no mass farther apart than max |supp F|");
  ProkhorovOptions opts;
  opts.max_points = cfg.point_budget;
  PowerWalker walk(m, cfg.cell_budget);
  run_rows(r, grid_for(m, cfg, 64), [&](Row& row) {
    const auto& a = walk.at(row.n);
    const auto b = walk.next();
    const auto fa = to_finite(a, cfg.prune);
    const auto fb = to_finite(b, cfg.prune);
    const auto res = prokhorov_exact(fb.measure, fa.measure, opts);
    const auto chk = coupling_check(res.plan, res.epsilon);
    double marginal = 0.0;
    const auto rs = res.plan.row_sums();
    const auto cs = res.plan.col_sums();
    for (std::size_t i = 0; i < rs.size(); ++i) {
      marginal = std::max(marginal, std::abs(rs[i] - fb.measure.masses()[i]));
    }
    for (std::size_t j = 0; j < cs.size(); ++j) {
      marginal = std::max(marginal, std::abs(cs[j] - fa.measure.masses()[j]));
    }
    // xi = S_n + X_{n+1}: joint mass F^n(i) F(k) at (i + k, i) on the grids.
    CouplingPlan naive;
    const std::size_t cols_b = b.extent(1);
    const std::size_t cols_a = a.extent(1);
    naive.row_points.reserve(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) naive.row_points.push_back(b.point(k));
    for (std::size_t k = 0; k < a.size(); ++k) naive.col_points.push_back(a.point(k));
    const auto base = m.trimmed();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double ma = a.masses()[i];
      if (ma <= 0.0) continue;
      const std::size_t ai = i / cols_a, aj = i % cols_a;
      for (std::size_t k = 0; k < base.size(); ++k) {
        const double mf = base.masses()[k];
        if (mf <= 0.0) continue;
        const std::size_t fi = k / base.extent(1), fj = k % base.extent(1);
        naive.joint.push_back({(ai + fi) * cols_b + (aj + fj), i, ma * mf});
      }
    }
    const auto naive_chk = coupling_check(naive, naive_eps);
    row.raw = res.epsilon;
    row.scaled = std::sqrt(double(row.n)) * res.epsilon;
    row.bound = res.epsilon + 1e-10;
    row.pass = chk.ok && marginal <= kCouplingMarginalTolerance;
    row.extras["exceed_mass"] = chk.exceed_mass;
    row.extras["marginal_error"] = marginal;
    row.extras["naive_exceed_mass"] = naive_chk.exceed_mass;
    row.extras["plan_entries"] = res.plan.joint.size();
  });
  return r;
}

ExperimentReport binom_tv(double p, const RunConfig& cfg) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("p must lie in (0, 1)");
  auto r = start("binom-tv", "binomial(" + short_fmt(p) + ")", cfg);
  const double limit = std::sqrt(p / (2.0 * std::numbers::pi * (1.0 - p)));
  r.metadata["p"] = p;
  r.metadata["local_limit"] = limit;
  note(r, "bound column holds p * max_k b_k(n, p); pass requires the three evaluations to agree");
  run_rows(r, plain_grid(cfg, 2048), [&](Row& row) {
    const auto d = binom_tv_identity(BinomialSpec(row.n, p));
    row.raw = d.total_variation;
    row.scaled = std::sqrt(double(row.n)) * d.total_variation;
    row.bound = d.p_times_mode;
    row.pass = std::abs(d.total_variation - d.kolmogorov) <= kIdentityTolerance &&
               std::abs(d.total_variation - d.p_times_mode) <= kIdentityTolerance;
    row.extras["kolmogorov"] = d.kolmogorov;
    row.extras["ratio_monotone"] = ratio_monotone(BinomialSpec(row.n, p));
  });
  return r;
}

ExperimentReport bernstein(double p, const RunConfig& cfg) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("p must lie in (0, 1)");
  auto r = start("bernstein", "binomial(" + short_fmt(p) + ")", cfg);
  r.metadata["p"] = p;
  note(r, "raw = P{eta - np >= np(1 - p)}, bound = exp(-np(1 - p)/4), scaled = raw / bound");
  run_rows(r, plain_grid(cfg, 2048), [&](Row& row) {
    const auto c = bernstein_bound(BinomialSpec(row.n, p));
    row.raw = c.exact_tail;
    row.bound = c.bound;
    row.scaled = c.exact_tail / c.bound;
    row.pass = c.exact_tail <= c.bound;
  });
  return r;
}

ExperimentReport gaussian_bound(const NamedMeasure& f, const RunConfig& cfg) {
  const auto mom = moments(f.measure);
  const auto base = GaussianParams::make(mom.mean, mom.covariance);
  auto r = start("gaussian-bound", f.id, cfg);
  note(r, "raw = closed form for N(nb, nS) vs N((n+1)b, (n+1)S); bound = general formula");
  double previous = std::numeric_limits<double>::infinity();
  run_rows(r, plain_grid(cfg, 4096), [&](Row& row) {
    const double nn = double(row.n);
    const double closed = successive_gaussian_tv_bound(base, row.n);
    const double general =
        gaussian_tv_bound(GaussianParams::make(nn * base.mean, nn * base.covariance),
                          GaussianParams::make((nn + 1) * base.mean, (nn + 1) * base.covariance));
    row.raw = closed;
    row.scaled = std::sqrt(nn) * closed;
    row.bound = general;
    row.pass = std::abs(closed - general) <= kIdentityTolerance && closed <= previous;
    previous = closed;
  });
  return r;
}

void write_csv(const ExperimentReport& report, std::ostream& out) {
  out << "experiment,id,n,raw,scaled,bound,pass\n";
  for (const auto& row : report.rows) {
    out << csv_field(report.experiment) << ',' << csv_field(report.id) << ',' << row.n << ','
        << fmt(row.raw) << ',' << fmt(row.scaled) << ',' << (row.bound ? fmt(*row.bound) : "")
        << ',' << (row.pass ? "true" : "false") << '\n';
  }
}

json to_json(const ExperimentReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json j = {{"n", row.n},
              {"raw", json_number(row.raw)},
              {"scaled", json_number(row.scaled)},
              {"bound", row.bound ? json_number(*row.bound) : json(nullptr)},
              {"pass", row.pass}};
    if (!row.error.empty()) j["error"] = row.error;
    if (!row.extras.empty()) j["extras"] = row.extras;
    rows.push_back(std::move(j));
  }
  return {{"experiment", report.experiment},
          {"id", report.id},
          {"all_pass", report.all_pass()},
          {"metadata", report.metadata},
          {"rows", std::move(rows)}};
}

}  // namespace convdist::harness
