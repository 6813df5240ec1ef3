#include "btkit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace btkit {

namespace {

void check_axis(const char* name, double lo, double hi, int n, double h) {
  std::ostringstream msg;
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    msg << "grid axis " << name << ": require min < max, got [" << lo << ", " << hi << "]";
    throw InvalidParameterError(msg.str());
  }
  if (n < 2) {
    msg << "grid axis " << name << ": need at least 2 samples, got " << n;
    throw InvalidParameterError(msg.str());
  }
  if (!(h > 0.0)) {
    msg << "grid axis " << name << ": step h must be positive, got " << h;
    throw InvalidParameterError(msg.str());
  }
  const double spacing = (hi - lo) / (n - 1);
  if (!(h < spacing / 10.0)) {
    msg << "grid axis " << name << ": step h = " << h
        << " must be below a tenth of the sample spacing " << spacing;
    throw InvalidParameterError(msg.str());
  }
}

// Shared accumulator for both scan dimensions.
class ScanAccumulator {
 public:
  template <class P>
  void add(const std::function<double(const P&)>& residual, const P& p) {
    double r = 0.0;
    try {
      r = std::abs(residual(p));
    } catch (const SingularPointError&) {
      ++report_.n_singular;
      return;
    }
    if (!std::isfinite(r)) {
      ++report_.n_singular;
      return;
    }
    ++report_.n_points;
    sum_sq_ += r * r;
    if (r > report_.max_abs || report_.worst_point.empty()) {
      report_.max_abs = r;
      report_.worst_point.assign(p.begin(), p.end());
    }
  }

  ResidualReport finish() {
    if (report_.n_points == 0) {
      throw EmptyDomainError("residual scan: every grid sample is singular (" +
                             std::to_string(report_.n_singular) + " points)");
    }
    report_.rms = std::sqrt(sum_sq_ / static_cast<double>(report_.n_points));
    // rms <= max_abs must survive rounding in the mean.
    report_.rms = std::min(report_.rms, report_.max_abs);
    return report_;
  }

 private:
  ResidualReport report_;
  double sum_sq_ = 0.0;
};

}  // namespace

void Grid2D::validate() const {
  check_axis("x", x_min, x_max, nx, h);
  check_axis("t", t_min, t_max, nt, h);
}

void Grid4D::validate() const {
  static constexpr const char* names[4] = {"x", "y", "z", "t"};
  for (int a = 0; a < 4; ++a) check_axis(names[a], lo[a], hi[a], n[a], h[a]);
}

double partial(const ScalarEvaluator& f, const Point2& p, std::size_t axis, double h) {
  return partial<const ScalarEvaluator&, 2>(f, p, axis, h);
}

VectorOps vector_ops(const VectorField& F, const Point4& p, const std::array<double, 4>& h) {
  const Complex3 centre = F(p);
  std::array<Complex3, 4> plus;
  std::array<Complex3, 4> minus;
  for (int a = 0; a < 4; ++a) {
    Point4 q = p;
    q[a] += h[a];
    plus[a] = F(q);
    q[a] = p[a] - h[a];
    minus[a] = F(q);
  }

  // d[a](c) = dF_c / dx_a
  auto d = [&](int a, int c) { return (plus[a](c) - minus[a](c)) / (2.0 * h[a]); };

  VectorOps ops;
  ops.divergence = d(0, 0) + d(1, 1) + d(2, 2);
  ops.curl = Complex3(d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0));
  ops.laplacian = Complex3::Zero();
  for (int a = 0; a < 3; ++a) {
    ops.laplacian += (plus[a] - 2.0 * centre + minus[a]) / (h[a] * h[a]);
  }
  ops.dt = (plus[3] - minus[3]) / (2.0 * h[3]);
  ops.dtt = (plus[3] - 2.0 * centre + minus[3]) / (h[3] * h[3]);
  return ops;
}

double max_part(std::complex<double> z) {
  return std::max(std::abs(z.real()), std::abs(z.imag()));
}

double max_part(const Complex3& v) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c) m = std::max(m, max_part(v(c)));
  return m;
}

ResidualReport residual_scan(const std::function<double(const Point2&)>& residual,
                             const Grid2D& grid) {
  grid.validate();
  ScanAccumulator acc;
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.nt; ++j) acc.add(residual, Point2{grid.x(i), grid.t(j)});
  }
  return acc.finish();
}

ResidualReport residual_scan(const std::function<double(const Point4&)>& residual,
                             const Grid4D& grid) {
  grid.validate();
  ScanAccumulator acc;
  for (int i = 0; i < grid.n[0]; ++i) {
    for (int j = 0; j < grid.n[1]; ++j) {
      for (int k = 0; k < grid.n[2]; ++k) {
        for (int l = 0; l < grid.n[3]; ++l) {
          acc.add(residual, Point4{grid.coord(0, i), grid.coord(1, j), grid.coord(2, k),
                                   grid.coord(3, l)});
        }
      }
    }
  }
  return acc.finish();
}

}  // namespace btkit
