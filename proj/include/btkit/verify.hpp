#pragma once

// Finite-difference operators and residual scans. Every other module certifies
// its closed forms through the routines in this header.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "btkit/errors.hpp"

namespace btkit {

inline constexpr double kDefaultStep = 1e-4;

using Point2 = std::array<double, 2>;  // (x, t)
using Point4 = std::array<double, 4>;  // (x, y, z, t)

using Complex3 = Eigen::Vector3cd;
using Real3 = Eigen::Vector3d;

using ScalarEvaluator = std::function<double(const Point2&)>;
using VectorField = std::function<Complex3(const Point4&)>;

/// Uniform tensor grid over (x, t) plus the central-difference step.
struct Grid2D {
  double x_min = -1.0;
  double x_max = 1.0;
  double t_min = -1.0;
  double t_max = 1.0;
  int nx = 41;
  int nt = 41;
  double h = kDefaultStep;

  /// Throws InvalidParameterError on bad ordering, counts < 2, h <= 0, or
  /// h >= spacing / 10.
  void validate() const;

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dt() const { return (t_max - t_min) / (nt - 1); }
  double x(int i) const { return x_min + i * dx(); }
  double t(int j) const { return t_min + j * dt(); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * nt; }

  static Grid2D square(double lo, double hi, int n, double h = kDefaultStep) {
    return Grid2D{lo, hi, lo, hi, n, n, h};
  }
};

/// Uniform tensor grid over (x, y, z, t). Steps are per axis because space
/// and time carry different units.
struct Grid4D {
  std::array<double, 4> lo{};
  std::array<double, 4> hi{};
  std::array<int, 4> n{2, 2, 2, 2};
  std::array<double, 4> h{kDefaultStep, kDefaultStep, kDefaultStep, kDefaultStep};

  void validate() const;

  double spacing(int axis) const { return (hi[axis] - lo[axis]) / (n[axis] - 1); }
  double coord(int axis, int i) const { return lo[axis] + i * spacing(axis); }
  std::size_t size() const {
    return static_cast<std::size_t>(n[0]) * n[1] * n[2] * n[3];
  }
};

struct ResidualReport {
  double max_abs = 0.0;
  double rms = 0.0;
  std::size_t n_points = 0;
  std::size_t n_singular = 0;
  std::vector<double> worst_point;
};

// ---------------------------------------------------------------------------
// Stencils. Generic over the point dimension and the value type (double,
// std::complex, Eigen vectors and matrices).

template <class F, std::size_t N>
using StencilValue = std::decay_t<std::invoke_result_t<F&, const std::array<double, N>&>>;

/// (f(p + h e) - f(p - h e)) / 2h
template <class F, std::size_t N>
StencilValue<F, N> partial(F&& f, const std::array<double, N>& p, std::size_t axis, double h) {
  auto plus = p;
  auto minus = p;
  plus[axis] += h;
  minus[axis] -= h;
  StencilValue<F, N> out = (f(plus) - f(minus)) * (0.5 / h);
  return out;
}

/// 3-point second derivative along one axis.
template <class F, std::size_t N>
StencilValue<F, N> second_partial(F&& f, const std::array<double, N>& p, std::size_t axis,
                                  double h) {
  auto plus = p;
  auto minus = p;
  plus[axis] += h;
  minus[axis] -= h;
  StencilValue<F, N> out = (f(plus) - 2.0 * f(p) + f(minus)) * (1.0 / (h * h));
  return out;
}

/// 4-point cross stencil for the mixed derivative along axes a and b.
template <class F, std::size_t N>
StencilValue<F, N> mixed_partial(F&& f, const std::array<double, N>& p, std::size_t a,
                                 std::size_t b, double h) {
  auto pp = p, pm = p, mp = p, mm = p;
  pp[a] += h, pp[b] += h;
  pm[a] += h, pm[b] -= h;
  mp[a] -= h, mp[b] += h;
  mm[a] -= h, mm[b] -= h;
  StencilValue<F, N> out = (f(pp) - f(pm) - f(mp) + f(mm)) * (0.25 / (h * h));
  return out;
}

/// Convenience overloads for scalar (x, t) fields.
double partial(const ScalarEvaluator& f, const Point2& p, std::size_t axis, double h);

struct VectorOps {
  std::complex<double> divergence;
  Complex3 curl;
  Complex3 laplacian;
  Complex3 dt;
  Complex3 dtt;
};

/// Divergence, curl, vector Laplacian and time derivatives of F at p from
/// the 9-point star stencil (centre plus +-h on each of the four axes).
VectorOps vector_ops(const VectorField& F, const Point4& p, const std::array<double, 4>& h);

/// max over components of max(|Re|, |Im|).
double max_part(const Complex3& v);
double max_part(std::complex<double> z);

/// Scan a pointwise residual over every grid sample. Samples whose
/// evaluation throws SingularPointError or yields a non-finite value are
/// excluded and counted in n_singular. Throws EmptyDomainError when nothing
/// remains.
ResidualReport residual_scan(const std::function<double(const Point2&)>& residual,
                             const Grid2D& grid);
ResidualReport residual_scan(const std::function<double(const Point4&)>& residual,
                             const Grid4D& grid);

}  // namespace btkit
