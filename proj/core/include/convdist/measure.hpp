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

// Discrete probability measures on uniform grids (dimension 1 or 2) and on
// finite point sets, with the algebra needed to study convolution powers:
// convolution, powering, rescaling X -> X / sqrt(a), shifting, and the
// truncation split F = (1 - p) U + p V together with the binomial mixtures
// built from it.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace convdist {

// A point of R^d for d <= 2. One-dimensional points keep the second
// coordinate at zero.
using Point = std::array<double, 2>;

inline constexpr double kMassTolerance = 1e-12;
inline constexpr double kLoadTolerance = 1e-9;
inline constexpr std::size_t kDefaultCellBudget = std::size_t{1} << 22;

struct Atom {
  Point x;
  double mass;
};

// Mass function on the grid { offset + (i * step[0], j * step[1]) }. Masses
// are stored row-major: index i runs over axis 0, j over axis 1. For dim == 1
// extent[1] == 1 and step[1], offset[1] are unused.
//
// The constructor only checks structure (nonnegative finite masses, positive
// steps); use `probability` for measures whose total mass must be one.
class LatticeMeasure {
 public:
  LatticeMeasure(int dim, std::array<double, 2> step, Point offset,
                 std::array<std::size_t, 2> extent, std::vector<double> masses);

  // Validates that `masses` sum to one within kLoadTolerance and rescales
  // them so the total is one to machine precision.
  static LatticeMeasure probability(int dim, std::array<double, 2> step, Point offset,
                                    std::array<std::size_t, 2> extent,
                                    std::vector<double> masses);

  static LatticeMeasure line(double step, double offset, std::vector<double> masses);

  // Unit mass at `at`, carried on a grid with the given step.
  static LatticeMeasure point_mass(int dim, Point at, std::array<double, 2> step = {1.0, 1.0});

  int dim() const { return dim_; }
  double step(int axis) const { return step_[axis]; }
  const std::array<double, 2>& steps() const { return step_; }
  double offset(int axis) const { return offset_[axis]; }
  const Point& offsets() const { return offset_; }
  std::size_t extent(int axis) const { return extent_[axis]; }
  const std::array<std::size_t, 2>& extents() const { return extent_; }
  std::size_t size() const { return masses_.size(); }

  std::span<const double> masses() const { return masses_; }
  double mass(std::size_t i, std::size_t j = 0) const { return masses_[i * extent_[1] + j]; }
  double total_mass() const;

  // Coordinates of the flat cell index `k`.
  Point point(std::size_t k) const;

  // Cells with positive mass, in increasing flat-index order (which is
  // increasing coordinate order in dimension 1).
  std::vector<Atom> atoms() const;

  // Same grid geometry, new masses (size must match).
  LatticeMeasure with_masses(std::vector<double> masses) const;

  // Drops zero-mass border rows/columns. A measure with no mass is returned
  // unchanged.
  LatticeMeasure trimmed() const;

 private:
  int dim_;
  std::array<double, 2> step_;
  Point offset_;
  std::array<std::size_t, 2> extent_;
  std::vector<double> masses_;
};

// Weighted point set. Masses are renormalized to total one on construction
// after checking they already sum to one within kLoadTolerance; points must be
// pairwise distinct.
class FiniteMeasure {
 public:
  FiniteMeasure(int dim, std::vector<Point> points, std::vector<double> masses);

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& masses() const { return masses_; }
  std::vector<Atom> atoms() const;

 private:
  int dim_;
  std::vector<Point> points_;
  std::vector<double> masses_;
};

// Mean and covariance of a Gaussian law. `make` symmetrizes the covariance,
// rejects asymmetry above 1e-12 or eigenvalues below -1e-12, and clamps the
// remaining slightly negative eigenvalues to zero.
struct GaussianParams {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  static GaussianParams make(Eigen::VectorXd mean, Eigen::MatrixXd covariance);
  int dim() const { return static_cast<int>(mean.size()); }
};

// F = (1 - p) U + p V where (1 - p) U is F restricted to the closed ball of
// radius `radius` about the origin. `v` is empty when p == 0.
struct Decomposition {
  double p;
  LatticeMeasure u;
  std::optional<LatticeMeasure> v;
  double radius;
  // Smallest eigenvalue of Cov(U); the split is only useful when it is
  // positive, which is left to the caller to judge.
  double u_min_eigenvalue;
};

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double third_absolute;  // E ||X||^3 about the origin
};

// A measure that may have lost mass to a cutoff, with the loss reported.
struct MixtureResult {
  LatticeMeasure measure;
  double dropped_mass;
};

struct FiniteConversion {
  FiniteMeasure measure;
  double dropped_mass;
};

enum class ConvolveMethod { kAuto, kDirect, kFft };

// Products above this many cell pairs go through the FFT under kAuto.
inline constexpr std::size_t kDirectConvolutionLimit = std::size_t{1} << 16;
// The FFT path fails hard when clamping removes more negative mass than this.
inline constexpr double kFftClampLimit = 1e-8;

LatticeMeasure convolve(const LatticeMeasure& f, const LatticeMeasure& g,
                        ConvolveMethod method = ConvolveMethod::kAuto);

// n-fold convolution power by binary exponentiation; power(f, 0) is the unit
// mass at the origin on f's grid.
LatticeMeasure power(const LatticeMeasure& f, std::int64_t n,
                     std::size_t cell_budget = kDefaultCellBudget);

// Law of X / sqrt(a) for X ~ f.
LatticeMeasure rescale(const LatticeMeasure& f, double a);
FiniteMeasure rescale(const FiniteMeasure& f, double a);

// Law of X + a.
LatticeMeasure shift(const LatticeMeasure& f, Point a);

Decomposition decompose(const LatticeMeasure& f, double radius);

// Sum_k b_k(n, p) V^k U^(n + extra - k) for k = 0..n. Terms whose binomial
// weight is below `cutoff` are skipped and their weight reported as dropped.
MixtureResult binomial_mixture(const Decomposition& dec, std::int64_t n, std::int64_t extra,
                               double cutoff = 1e-15,
                               std::size_t cell_budget = kDefaultCellBudget);

// G_n = Sum_k b_k(n, p) V^k U^(n + 1 - k).
MixtureResult interpolant(const Decomposition& dec, std::int64_t n, double cutoff = 1e-15,
                          std::size_t cell_budget = kDefaultCellBudget);

Moments moments(const LatticeMeasure& f);

// Drops cells with mass <= prune (prune in [0, 1e-6]) and renormalizes.
FiniteConversion to_finite(const LatticeMeasure& f, double prune = 0.0);

// Weighted sum of measures sharing a step; offsets must differ by whole grid
// steps. Zero weights are skipped.
LatticeMeasure mix(std::span<const double> weights, std::span<const LatticeMeasure> parts);

// Concentrated on an affine hyperplane (a point in 1D, a line in 2D) that
// misses the origin.
bool is_trivial(const LatticeMeasure& f);

// Mass at x equals mass at -x for every atom, within `tol`.
bool is_symmetric(const LatticeMeasure& f, double tol = 1e-12);

// Tolerance under which two grid coordinates of these measures are the same
// point.
double coordinate_tolerance(const LatticeMeasure& f, const LatticeMeasure& g);

}  // namespace convdist
