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

#include "convdist/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>

#include <fftw3.h>

#include "convdist/binomial.hpp"
#include "convdist/error.hpp"

namespace convdist {
namespace {

void check_dim(int dim) {
  if (dim != 1 && dim != 2) {
    throw InvalidInput("dimension must be 1 or 2, got " + std::to_string(dim));
  }
}

double kahan_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// FFT convolution

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* raw = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (raw == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(raw);
}

// The FFTW planner is not reentrant; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  explicit Plan(fftw_plan plan) : plan_(plan) {
    if (plan_ == nullptr) throw NumericalError("FFTW failed to create a plan");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

// Smallest n' >= n whose prime factors are all in {2, 3, 5, 7}.
std::size_t fft_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

std::vector<double> fft_convolve(const LatticeMeasure& f, const LatticeMeasure& g,
                                 std::array<std::size_t, 2> out_extent) {
  const std::size_t n0 = fft_size(out_extent[0]);
  const std::size_t n1 = f.dim() == 2 ? fft_size(out_extent[1]) : 1;
  const std::size_t real_size = n0 * n1;
  const std::size_t half = f.dim() == 2 ? n1 / 2 + 1 : n0 / 2 + 1;
  const std::size_t complex_size = f.dim() == 2 ? n0 * half : half;

  auto a = fftw_buffer<double>(real_size);
  auto b = fftw_buffer<double>(real_size);
  auto fa = fftw_buffer<fftw_complex>(complex_size);
  auto fb = fftw_buffer<fftw_complex>(complex_size);

  auto make_forward = [&](double* in, fftw_complex* out) {
    std::lock_guard lock(planner_mutex());
    if (f.dim() == 1) {
      return fftw_plan_dft_r2c_1d(static_cast<int>(n0), in, out, FFTW_ESTIMATE);
    }
    return fftw_plan_dft_r2c_2d(static_cast<int>(n0), static_cast<int>(n1), in, out,
                                FFTW_ESTIMATE);
  };
  Plan forward_a(make_forward(a.get(), fa.get()));
  Plan forward_b(make_forward(b.get(), fb.get()));
  Plan inverse([&] {
    std::lock_guard lock(planner_mutex());
    if (f.dim() == 1) {
      return fftw_plan_dft_c2r_1d(static_cast<int>(n0), fa.get(), a.get(), FFTW_ESTIMATE);
    }
    return fftw_plan_dft_c2r_2d(static_cast<int>(n0), static_cast<int>(n1), fa.get(), a.get(),
                                FFTW_ESTIMATE);
  }());

  auto load = [&](const LatticeMeasure& m, double* dst) {
    std::fill(dst, dst + real_size, 0.0);
    for (std::size_t i = 0; i < m.extent(0); ++i) {
      for (std::size_t j = 0; j < m.extent(1); ++j) dst[i * n1 + j] = m.mass(i, j);
    }
  };
  load(f, a.get());
  load(g, b.get());
  forward_a.execute();
  forward_b.execute();
  for (std::size_t k = 0; k < complex_size; ++k) {
    const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
    const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
    fa[k][0] = re;
    fa[k][1] = im;
  }
  inverse.execute();

  const double scale = 1.0 / static_cast<double>(real_size);
  std::vector<double> out(out_extent[0] * out_extent[1]);
  double clamped = 0.0;
  for (std::size_t i = 0; i < out_extent[0]; ++i) {
    for (std::size_t j = 0; j < out_extent[1]; ++j) {
      double v = a[i * n1 + j] * scale;
      if (v < 0.0) {
        clamped -= v;
        v = 0.0;
      }
      out[i * out_extent[1] + j] = v;
    }
  }
  if (clamped > kFftClampLimit) {
    throw NumericalError("FFT convolution clamped " + std::to_string(clamped) +
                         " of negative mass");
  }
  const double target = f.total_mass() * g.total_mass();
  const double sum = kahan_sum(out);
  if (sum > 0.0) {
    const double r = target / sum;
    for (double& v : out) v *= r;
  }
  return out;
}

std::vector<double> direct_convolve(const LatticeMeasure& f, const LatticeMeasure& g,
                                    std::array<std::size_t, 2> out_extent) {
  std::vector<double> out(out_extent[0] * out_extent[1], 0.0);
  const std::size_t f1 = f.extent(1);
  const std::size_t g0 = g.extent(0);
  const std::size_t g1 = g.extent(1);
  const auto gm = g.masses();
  for (std::size_t i = 0; i < f.extent(0); ++i) {
    for (std::size_t j = 0; j < f1; ++j) {
      const double w = f.mass(i, j);
      if (w == 0.0) continue;
      for (std::size_t k = 0; k < g0; ++k) {
        double* row = &out[(i + k) * out_extent[1] + j];
        const double* src = &gm[k * g1];
        for (std::size_t l = 0; l < g1; ++l) row[l] += w * src[l];
      }
    }
  }
  return out;
}

// Grows a grid as parts are added; parts must sit on the same lattice.
class GridAccumulator {
 public:
  GridAccumulator(int dim, std::array<double, 2> step) : dim_(dim), step_(step) {}

  void add(double weight, const LatticeMeasure& part) {
    if (part.dim() != dim_ || part.step(0) != step_[0] ||
        (dim_ == 2 && part.step(1) != step_[1])) {
      throw InvalidInput("mixture parts must share dimension and step");
    }
    if (masses_.empty()) {
      base_ = part.offsets();
      extent_ = part.extents();
      masses_.assign(part.size(), 0.0);
    }
    std::array<std::int64_t, 2> shift{0, 0};
    for (int axis = 0; axis < dim_; ++axis) {
      const double units = (part.offset(axis) - base_[axis]) / step_[axis];
      const double rounded = std::round(units);
      if (std::abs(units - rounded) > 1e-6) {
        throw InvalidInput("mixture parts are not aligned on a common grid");
      }
      shift[axis] = static_cast<std::int64_t>(rounded);
    }
    grow(shift, part.extents());
    for (int axis = 0; axis < dim_; ++axis) {
      shift[axis] = static_cast<std::int64_t>(
          std::round((part.offset(axis) - base_[axis]) / step_[axis]));
    }
    for (std::size_t i = 0; i < part.extent(0); ++i) {
      for (std::size_t j = 0; j < part.extent(1); ++j) {
        const std::size_t r = static_cast<std::size_t>(shift[0]) + i;
        const std::size_t c = static_cast<std::size_t>(shift[1]) + j;
        masses_[r * extent_[1] + c] += weight * part.mass(i, j);
      }
    }
  }

  bool empty() const { return masses_.empty(); }
  std::size_t cells() const { return masses_.size(); }

  LatticeMeasure finish() && {
    return LatticeMeasure(dim_, step_, base_, extent_, std::move(masses_));
  }

 private:
  void grow(std::array<std::int64_t, 2> shift, std::array<std::size_t, 2> ext) {
    std::array<std::int64_t, 2> lo{0, 0};
    std::array<std::int64_t, 2> hi{static_cast<std::int64_t>(extent_[0]),
                                   static_cast<std::int64_t>(extent_[1])};
    bool changed = false;
    for (int axis = 0; axis < 2; ++axis) {
      const std::int64_t start = shift[axis];
      const std::int64_t stop = shift[axis] + static_cast<std::int64_t>(ext[axis]);
      if (start < lo[axis]) lo[axis] = start, changed = true;
      if (stop > hi[axis]) hi[axis] = stop, changed = true;
    }
    if (!changed) return;
    const std::array<std::size_t, 2> next{static_cast<std::size_t>(hi[0] - lo[0]),
                                          static_cast<std::size_t>(hi[1] - lo[1])};
    std::vector<double> grown(next[0] * next[1], 0.0);
    for (std::size_t i = 0; i < extent_[0]; ++i) {
      for (std::size_t j = 0; j < extent_[1]; ++j) {
        const std::size_t r = i + static_cast<std::size_t>(-lo[0]);
        const std::size_t c = j + static_cast<std::size_t>(-lo[1]);
        grown[r * next[1] + c] = masses_[i * extent_[1] + j];
      }
    }
    for (int axis = 0; axis < dim_; ++axis) {
      base_[axis] += static_cast<double>(lo[axis]) * step_[axis];
    }
    extent_ = next;
    masses_ = std::move(grown);
  }

  int dim_;
  std::array<double, 2> step_;
  Point base_{0.0, 0.0};
  std::array<std::size_t, 2> extent_{0, 0};
  std::vector<double> masses_;
};

double norm(const Point& x) { return std::hypot(x[0], x[1]); }

}  // namespace

// ---------------------------------------------------------------------------
// LatticeMeasure

LatticeMeasure::LatticeMeasure(int dim, std::array<double, 2> step, Point offset,
                               std::array<std::size_t, 2> extent, std::vector<double> masses)
    : dim_(dim), step_(step), offset_(offset), extent_(extent), masses_(std::move(masses)) {
  check_dim(dim_);
  if (dim_ == 1) {
    step_[1] = 1.0;
    offset_[1] = 0.0;
    if (extent_[1] != 1) throw InvalidInput("one-dimensional grid must have extent[1] == 1");
  }
  for (int axis = 0; axis < dim_; ++axis) {
    if (!(step_[axis] > 0.0) || !std::isfinite(step_[axis])) {
      throw InvalidInput("grid step must be positive and finite");
    }
    if (!std::isfinite(offset_[axis])) throw InvalidInput("grid offset must be finite");
  }
  if (extent_[0] == 0 || extent_[1] == 0) throw InvalidInput("grid must have at least one cell");
  if (masses_.size() != extent_[0] * extent_[1]) {
    throw InvalidInput("mass array size does not match grid extent");
  }
  for (double m : masses_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw InvalidInput("masses must be finite and nonnegative");
    }
  }
}

LatticeMeasure LatticeMeasure::probability(int dim, std::array<double, 2> step, Point offset,
                                           std::array<std::size_t, 2> extent,
                                           std::vector<double> masses) {
  LatticeMeasure m(dim, step, offset, extent, std::move(masses));
  const double total = m.total_mass();
  if (std::abs(total - 1.0) > kLoadTolerance) {
    throw InvalidInput("masses sum to " + std::to_string(total) + ", expected 1");
  }
  for (double& v : m.masses_) v /= total;
  return m;
}

LatticeMeasure LatticeMeasure::line(double step, double offset, std::vector<double> masses) {
  const std::size_t n = masses.size();
  return probability(1, {step, 1.0}, {offset, 0.0}, {n, 1}, std::move(masses));
}

LatticeMeasure LatticeMeasure::point_mass(int dim, Point at, std::array<double, 2> step) {
  return LatticeMeasure(dim, step, at, {1, 1}, {1.0});
}

double LatticeMeasure::total_mass() const { return kahan_sum(masses_); }

Point LatticeMeasure::point(std::size_t k) const {
  const std::size_t i = k / extent_[1];
  const std::size_t j = k % extent_[1];
  if (dim_ == 1) return {offset_[0] + static_cast<double>(i) * step_[0], 0.0};
  return {offset_[0] + static_cast<double>(i) * step_[0],
          offset_[1] + static_cast<double>(j) * step_[1]};
}

std::vector<Atom> LatticeMeasure::atoms() const {
  std::vector<Atom> out;
  for (std::size_t k = 0; k < masses_.size(); ++k) {
    if (masses_[k] > 0.0) out.push_back({point(k), masses_[k]});
  }
  return out;
}

LatticeMeasure LatticeMeasure::with_masses(std::vector<double> masses) const {
  return LatticeMeasure(dim_, step_, offset_, extent_, std::move(masses));
}

LatticeMeasure LatticeMeasure::trimmed() const {
  std::size_t r0 = extent_[0], r1 = 0, c0 = extent_[1], c1 = 0;
  for (std::size_t i = 0; i < extent_[0]; ++i) {
    for (std::size_t j = 0; j < extent_[1]; ++j) {
      if (mass(i, j) > 0.0) {
        r0 = std::min(r0, i);
        r1 = std::max(r1, i + 1);
        c0 = std::min(c0, j);
        c1 = std::max(c1, j + 1);
      }
    }
  }
  if (r0 >= r1) return *this;
  std::vector<double> out;
  out.reserve((r1 - r0) * (c1 - c0));
  for (std::size_t i = r0; i < r1; ++i) {
    for (std::size_t j = c0; j < c1; ++j) out.push_back(mass(i, j));
  }
  Point origin = offset_;
  origin[0] += static_cast<double>(r0) * step_[0];
  if (dim_ == 2) origin[1] += static_cast<double>(c0) * step_[1];
  return LatticeMeasure(dim_, step_, origin, {r1 - r0, c1 - c0}, std::move(out));
}

// ---------------------------------------------------------------------------
// FiniteMeasure

FiniteMeasure::FiniteMeasure(int dim, std::vector<Point> points, std::vector<double> masses)
    : dim_(dim), points_(std::move(points)), masses_(std::move(masses)) {
  check_dim(dim_);
  if (points_.empty()) throw InvalidInput("finite measure needs at least one point");
  if (points_.size() != masses_.size()) {
    throw InvalidInput("points and masses must have the same length");
  }
  for (auto& x : points_) {
    if (dim_ == 1) x[1] = 0.0;
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) {
      throw InvalidInput("point coordinates must be finite");
    }
  }
  for (double m : masses_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw InvalidInput("masses must be finite and nonnegative");
    }
  }
  const double total = kahan_sum(masses_);
  if (std::abs(total - 1.0) > kLoadTolerance) {
    throw InvalidInput("masses sum to " + std::to_string(total) + ", expected 1");
  }
  for (double& m : masses_) m /= total;
  std::vector<Point> sorted = points_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidInput("finite measure points must be pairwise distinct");
  }
}

std::vector<Atom> FiniteMeasure::atoms() const {
  std::vector<Atom> out;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (masses_[k] > 0.0) out.push_back({points_[k], masses_[k]});
  }
  return out;
}

// ---------------------------------------------------------------------------
// GaussianParams

GaussianParams GaussianParams::make(Eigen::VectorXd mean, Eigen::MatrixXd covariance) {
  const auto d = mean.size();
  if (d < 1 || covariance.rows() != d || covariance.cols() != d) {
    throw InvalidInput("covariance must be a square matrix matching the mean dimension");
  }
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidInput("covariance is not symmetric");
  }
  Eigen::MatrixXd sym = 0.5 * (covariance + covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  Eigen::VectorXd lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -1e-12) {
    throw InvalidInput("covariance has a negative eigenvalue");
  }
  if (lambda.minCoeff() < 0.0) {
    lambda = lambda.cwiseMax(0.0);
    sym = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
  }
  return GaussianParams{std::move(mean), std::move(sym)};
}

// ---------------------------------------------------------------------------
// Operations

LatticeMeasure convolve(const LatticeMeasure& f, const LatticeMeasure& g, ConvolveMethod method) {
  if (f.dim() != g.dim()) throw InvalidInput("cannot convolve measures of different dimension");
  for (int axis = 0; axis < f.dim(); ++axis) {
    if (f.step(axis) != g.step(axis)) {
      throw InvalidInput("cannot convolve measures with different grid steps");
    }
  }
  const std::array<std::size_t, 2> extent{f.extent(0) + g.extent(0) - 1,
                                          f.extent(1) + g.extent(1) - 1};
  Point offset{f.offset(0) + g.offset(0), f.offset(1) + g.offset(1)};
  if (method == ConvolveMethod::kAuto) {
    const bool small = std::min(f.size(), g.size()) <= 32 ||
                       f.size() * g.size() <= kDirectConvolutionLimit;
    method = small ? ConvolveMethod::kDirect : ConvolveMethod::kFft;
  }
  auto masses = method == ConvolveMethod::kDirect ? direct_convolve(f, g, extent)
                                                  : fft_convolve(f, g, extent);
  return LatticeMeasure(f.dim(), f.steps(), offset, extent, std::move(masses));
}

LatticeMeasure power(const LatticeMeasure& f, std::int64_t n, std::size_t cell_budget) {
  if (n < 0) throw InvalidInput("convolution power must be nonnegative");
  if (n == 0) return LatticeMeasure::point_mass(f.dim(), {0.0, 0.0}, f.steps());
  long double cells = 1.0L;
  for (int axis = 0; axis < 2; ++axis) {
    cells *= static_cast<long double>(f.extent(axis) - 1) * static_cast<long double>(n) + 1.0L;
  }
  if (cells > static_cast<long double>(cell_budget)) {
    const auto requested = cells > 1e18L ? std::numeric_limits<std::size_t>::max()
                                         : static_cast<std::size_t>(cells);
    throw ResourceError("cell budget", cell_budget, requested);
  }
  std::optional<LatticeMeasure> result;
  LatticeMeasure base = f;
  for (std::int64_t k = n;;) {
    if (k & 1) result = result ? convolve(*result, base) : base;
    k >>= 1;
    if (k == 0) break;
    base = convolve(base, base);
  }
  return *std::move(result);
}

LatticeMeasure rescale(const LatticeMeasure& f, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("rescale factor must be positive");
  const double s = std::sqrt(a);
  std::array<double, 2> step = f.steps();
  Point offset = f.offsets();
  for (int axis = 0; axis < f.dim(); ++axis) {
    step[axis] /= s;
    offset[axis] /= s;
  }
  return LatticeMeasure(f.dim(), step, offset, f.extents(),
                        std::vector<double>(f.masses().begin(), f.masses().end()));
}

FiniteMeasure rescale(const FiniteMeasure& f, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("rescale factor must be positive");
  const double s = std::sqrt(a);
  std::vector<Point> pts = f.points();
  for (auto& x : pts) x = {x[0] / s, x[1] / s};
  return FiniteMeasure(f.dim(), std::move(pts), f.masses());
}

LatticeMeasure shift(const LatticeMeasure& f, Point a) {
  Point offset = f.offsets();
  offset[0] += a[0];
  if (f.dim() == 2) offset[1] += a[1];
  return LatticeMeasure(f.dim(), f.steps(), offset, f.extents(),
                        std::vector<double>(f.masses().begin(), f.masses().end()));
}

Decomposition decompose(const LatticeMeasure& f, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidInput("truncation radius must be positive");
  }
  const double reach = radius + 1e-12 * std::max(1.0, radius);
  std::vector<double> inside(f.size(), 0.0);
  std::vector<double> outside(f.size(), 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double m = f.masses()[k];
    if (m == 0.0) continue;
    (norm(f.point(k)) <= reach ? inside : outside)[k] = m;
  }
  const double mass_in = kahan_sum(inside);
  const double mass_out = kahan_sum(outside);
  if (!(mass_in > 0.0)) throw InvalidInput("no mass inside the truncation ball");
  for (double& m : inside) m /= mass_in;
  LatticeMeasure u = f.with_masses(std::move(inside)).trimmed();
  std::optional<LatticeMeasure> v;
  double p = 0.0;
  if (mass_out > 0.0) {
    p = mass_out / (mass_in + mass_out);
    for (double& m : outside) m /= mass_out;
    v = f.with_masses(std::move(outside)).trimmed();
  }
  const Moments mu = moments(u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mu.covariance, Eigen::EigenvaluesOnly);
  return Decomposition{p, std::move(u), std::move(v), radius, eig.eigenvalues().minCoeff()};
}

MixtureResult binomial_mixture(const Decomposition& dec, std::int64_t n, std::int64_t extra,
                               double cutoff, std::size_t cell_budget) {
  if (n < 0 || extra < 0) throw InvalidInput("mixture order must be nonnegative");
  if (dec.p > 0.0 && !dec.v) throw InvalidInput("decomposition with p > 0 needs V");
  const std::vector<double> w = binomial_weights(n, dec.p);
  double dropped = 0.0;
  std::int64_t kmin = -1, kmax = -1;
  for (std::int64_t k = 0; k <= n; ++k) {
    if (w[k] >= cutoff && w[k] > 0.0) {
      if (kmin < 0) kmin = k;
      kmax = k;
    }
  }
  for (std::int64_t k = 0; k <= n; ++k) {
    if (k < kmin || k > kmax || !(w[k] >= cutoff && w[k] > 0.0)) dropped += w[k];
  }
  GridAccumulator acc(dec.u.dim(), dec.u.steps());
  if (kmin < 0) {
    return {std::move(acc).finish(), dropped};
  }
  // V^k for the retained k, then U^m for increasing m = n + extra - k.
  std::vector<LatticeMeasure> v_powers;
  v_powers.reserve(static_cast<std::size_t>(kmax - kmin + 1));
  v_powers.push_back(kmin == 0 ? power(dec.u, 0) : power(*dec.v, kmin, cell_budget));
  for (std::int64_t k = kmin + 1; k <= kmax; ++k) {
    v_powers.push_back(convolve(v_powers.back(), *dec.v));
  }
  LatticeMeasure u_power = power(dec.u, n + extra - kmax, cell_budget);
  for (std::int64_t k = kmax; k >= kmin; --k) {
    if (k < kmax) u_power = convolve(u_power, dec.u);
    if (!(w[k] >= cutoff && w[k] > 0.0)) continue;
    const LatticeMeasure term = convolve(v_powers[static_cast<std::size_t>(k - kmin)], u_power);
    acc.add(w[k], term);
    if (acc.cells() > cell_budget) throw ResourceError("cell budget", cell_budget, acc.cells());
  }
  return {std::move(acc).finish(), dropped};
}

MixtureResult interpolant(const Decomposition& dec, std::int64_t n, double cutoff,
                          std::size_t cell_budget) {
  if (n < 1) throw InvalidInput("interpolant needs n >= 1");
  return binomial_mixture(dec, n, 1, cutoff, cell_budget);
}

Moments moments(const LatticeMeasure& f) {
  const int d = f.dim();
  const auto atoms = f.atoms();
  double total = 0.0;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  double third = 0.0;
  for (const auto& a : atoms) {
    total += a.mass;
    for (int i = 0; i < d; ++i) mean[i] += a.mass * a.x[i];
    third += a.mass * std::pow(norm(a.x), 3);
  }
  if (!(total > 0.0)) throw InvalidInput("moments of a measure without mass");
  mean /= total;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (const auto& a : atoms) {
    Eigen::VectorXd c(d);
    for (int i = 0; i < d; ++i) c[i] = a.x[i] - mean[i];
    cov += a.mass * c * c.transpose();
  }
  cov /= total;
  return Moments{std::move(mean), std::move(cov), third / total};
}

FiniteConversion to_finite(const LatticeMeasure& f, double prune) {
  if (!(prune >= 0.0) || prune > 1e-6) throw InvalidInput("prune threshold must lie in [0, 1e-6]");
  std::vector<Point> pts;
  std::vector<double> kept;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double m = f.masses()[k];
    if (m > prune) {
      pts.push_back(f.point(k));
      kept.push_back(m);
    }
  }
  if (kept.empty()) throw InvalidInput("pruning removed all mass");
  const double kept_mass = kahan_sum(kept);
  const double dropped = f.total_mass() - kept_mass;
  for (double& m : kept) m /= kept_mass;
  return {FiniteMeasure(f.dim(), std::move(pts), std::move(kept)), std::max(dropped, 0.0)};
}

LatticeMeasure mix(std::span<const double> weights, std::span<const LatticeMeasure> parts) {
  if (weights.size() != parts.size() || parts.empty()) {
    throw InvalidInput("mix needs one weight per part and at least one part");
  }
  GridAccumulator acc(parts[0].dim(), parts[0].steps());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (weights[i] < 0.0) throw InvalidInput("mixture weights must be nonnegative");
    if (weights[i] == 0.0) continue;
    acc.add(weights[i], parts[i]);
  }
  if (acc.empty()) throw InvalidInput("mixture has no positive weight");
  return std::move(acc).finish();
}

bool is_trivial(const LatticeMeasure& f) {
  const auto atoms = f.atoms();
  if (atoms.empty()) return false;
  double scale = 1.0;
  for (const auto& a : atoms) scale = std::max({scale, std::abs(a.x[0]), std::abs(a.x[1])});
  const double tol = 1e-9 * scale;
  const Point p0 = atoms.front().x;
  const Atom* far = &atoms.front();
  double best = 0.0;
  for (const auto& a : atoms) {
    const double dist = std::hypot(a.x[0] - p0[0], a.x[1] - p0[1]);
    if (dist > best) best = dist, far = &a;
  }
  if (best <= tol) return norm(p0) > tol;
  if (f.dim() == 1) return false;
  const double dx = (far->x[0] - p0[0]) / best;
  const double dy = (far->x[1] - p0[1]) / best;
  for (const auto& a : atoms) {
    if (std::abs(dx * (a.x[1] - p0[1]) - dy * (a.x[0] - p0[0])) > tol) return false;
  }
  return std::abs(dx * p0[1] - dy * p0[0]) > tol;
}

bool is_symmetric(const LatticeMeasure& f, double tol) {
  std::vector<Atom> atoms;
  for (const auto& a : f.atoms()) {
    if (a.mass > tol) atoms.push_back(a);
  }
  const double ctol = 1e-9 * std::min(f.step(0), f.dim() == 2 ? f.step(1) : f.step(0));
  const std::size_t n = atoms.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = atoms[i];
    const Atom& b = atoms[n - 1 - i];
    if (std::abs(a.x[0] + b.x[0]) > ctol || std::abs(a.x[1] + b.x[1]) > ctol) return false;
    if (std::abs(a.mass - b.mass) > tol) return false;
  }
  return true;
}

double coordinate_tolerance(const LatticeMeasure& f, const LatticeMeasure& g) {
  double s = std::min(f.step(0), g.step(0));
  if (f.dim() == 2 && g.dim() == 2) s = std::min({s, f.step(1), g.step(1)});
  return 1e-9 * s;
}

}  // namespace convdist
