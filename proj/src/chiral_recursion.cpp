#include "btkit/chiral_recursion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace btkit::chiral {

namespace {

constexpr int kGauss = 8;

struct GaussRule {
  std::array<double, kGauss> x{};
  std::array<double, kGauss> w{};
};

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    const int n = kGauss;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      r.x[i] = z;
      r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

Matrix zero_or(const Matrix& base, int n) {
  if (base.size() == 0) return Matrix::Zero(n, n);
  if (base.rows() != n || base.cols() != n) {
    throw InvalidParameterError("integration constant has the wrong dimension");
  }
  return base;
}

// One Gauss segment of a line integral, ending on node `node` and
// continuing from `from` (-1 for the anchor).
struct Segment {
  int node;
  int from;
  std::array<double, kGauss> s;
  std::array<double, kGauss> w;
};

std::vector<Segment> line_rule(const std::vector<double>& nodes, double anchor) {
  const GaussRule& g = gauss_rule();
  std::vector<Segment> out;
  auto push = [&](int node, int from, double a, double b) {
    Segment seg{node, from, {}, {}};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int q = 0; q < kGauss; ++q) {
      seg.s[q] = mid + half * g.x[q];
      seg.w[q] = half * g.w[q];
    }
    out.push_back(seg);
  };
  const int count = static_cast<int>(nodes.size());
  int from = -1;
  double prev = anchor;
  for (int k = 0; k < count; ++k) {
    if (nodes[k] < anchor) continue;
    push(k, from, prev, nodes[k]);
    from = k;
    prev = nodes[k];
  }
  from = -1;
  prev = anchor;
  for (int k = count - 1; k >= 0; --k) {
    if (nodes[k] >= anchor) continue;
    push(k, from, prev, nodes[k]);
    from = k;
    prev = nodes[k];
  }
  return out;
}

// Integrand of a line integral along `axis` at p. L is the log-derivative
// of g along the other axis. `scale` receives the magnitude of the summands,
// so cancellation down to roundoff does not shrink the path tolerance.
using Integrand =
    std::function<Matrix(int axis, const Point2& p, const Matrix& L, double& scale)>;

struct NodeValues {
  std::shared_ptr<ChebyshevTable> table;
  IntegrationReport report;
};

const Grid2D& validated(const Grid2D& grid, int nodes) {
  grid.validate();
  if (nodes < 2) throw InvalidParameterError("need at least 2 Chebyshev nodes per axis");
  return grid;
}

// Line integrals from the anchor to every tensor node along both axis
// orders. Log-derivatives of g at the quadrature points are computed once
// and reused for every integrand.
class PathIntegrator {
 public:
  PathIntegrator(const MatrixField& g, const Grid2D& grid, int nodes)
      : n_(g.n()),
        box_(validated(grid, nodes)),
        xs_(ChebyshevTable::nodes(grid.x_min, grid.x_max, nodes)),
        ts_(ChebyshevTable::nodes(grid.t_min, grid.t_max, nodes)),
        x0_(std::clamp(0.0, grid.x_min, grid.x_max)),
        t0_(std::clamp(0.0, grid.t_min, grid.t_max)),
        x_rule_(line_rule(xs_, x0_)),
        t_rule_(line_rule(ts_, t0_)) {
    xt_row_ = make_line(g, 0, t0_);
    tx_col_ = make_line(g, 1, x0_);
    for (double x : xs_) xt_cols_.push_back(make_line(g, 1, x));
    for (double t : ts_) tx_rows_.push_back(make_line(g, 0, t));
  }

  NodeValues integrate(const Integrand& f, const Matrix& base) const {
    double scale = 0.0;
    const auto row = run(xt_row_, f, scale);
    const auto col = run(tx_col_, f, scale);

    NodeValues out;
    out.table = std::make_shared<ChebyshevTable>(box_.x_min, box_.x_max, box_.t_min, box_.t_max,
                                                 nx(), nt(), n_);
    double disagreement = 0.0;
    std::vector<std::vector<Matrix>> tx_rows;
    for (int j = 0; j < nt(); ++j) tx_rows.push_back(run(tx_rows_[j], f, scale));
    for (int i = 0; i < nx(); ++i) {
      const auto up = run(xt_cols_[i], f, scale);
      for (int j = 0; j < nt(); ++j) {
        const Matrix xt = base + row[i] + up[j];
        const Matrix tx = base + col[j] + tx_rows[j][i];
        disagreement = std::max(disagreement, max_entry(xt - tx));
        out.table->set_sample(i, j, xt);
      }
    }
    out.report.disagreement = disagreement;
    out.report.integrand_scale = scale;
    out.report.diameter = std::hypot(box_.x_max - box_.x_min, box_.t_max - box_.t_min);
    return out;
  }

 private:
  struct Line {
    int axis;
    double fixed;
    std::vector<Matrix> L;  // per segment, per Gauss point
  };

  int nx() const { return static_cast<int>(xs_.size()); }
  int nt() const { return static_cast<int>(ts_.size()); }

  const std::vector<Segment>& rule(int axis) const { return axis == 0 ? x_rule_ : t_rule_; }

  Point2 point(const Line& line, double s) const {
    return line.axis == 0 ? Point2{s, line.fixed} : Point2{line.fixed, s};
  }

  Line make_line(const MatrixField& g, int axis, double fixed) const {
    Line line{axis, fixed, {}};
    for (const Segment& seg : rule(axis)) {
      for (double s : seg.s) {
        const Point2 p = point(line, s);
        line.L.push_back(checked_inverse(g(p), p) * g.partial(p, 1 - axis));
      }
    }
    return line;
  }

  std::vector<Matrix> run(const Line& line, const Integrand& f, double& scale) const {
    const auto& segs = rule(line.axis);
    std::vector<Matrix> value(line.axis == 0 ? nx() : nt());
    std::size_t q = 0;
    for (const Segment& seg : segs) {
      Matrix acc = seg.from < 0 ? Matrix::Zero(n_, n_) : value[seg.from];
      for (int k = 0; k < kGauss; ++k, ++q) {
        double s = 0.0;
        const Matrix v = f(line.axis, point(line, seg.s[k]), line.L[q], s);
        scale = std::max(scale, s);
        acc += seg.w[k] * v;
      }
      value[seg.node] = std::move(acc);
    }
    return value;
  }

  int n_;
  Grid2D box_;
  std::vector<double> xs_, ts_;
  double x0_, t0_;
  std::vector<Segment> x_rule_, t_rule_;
  Line xt_row_, tx_col_;
  std::vector<Line> xt_cols_, tx_rows_;
};

// floor_scale: integrand scale of earlier hierarchy levels. A level that
// has collapsed to roundoff is judged against the scale it collapsed from.
void check_paths(const IntegrationReport& r, const ChiralOptions& options, const char* what,
                 int level, double floor_scale = 0.0) {
  const double tol =
      options.path_tolerance * r.diameter * std::max(r.integrand_scale, floor_scale);
  if (r.disagreement > tol) {
    std::ostringstream msg;
    msg << what << ": x-then-t and t-then-x integrals disagree by " << r.disagreement
        << " (tolerance " << tol << "); integrability condition violated";
    if (level >= 0) msg << " at hierarchy level " << level;
    throw PathDependenceError(msg.str(), r.disagreement, level);
  }
}

Integrand recursion_integrand(const MatrixField& phi) {
  return [&phi](int axis, const Point2& p, const Matrix& L, double& scale) -> Matrix {
    const Matrix centre = phi(p);
    // Along x: Phi_t + [L_t, Phi]. Along t: -(Phi_x + [L_x, Phi]).
    const int other = 1 - axis;
    const Matrix d = phi.partial(p, other);
    const Matrix v = d + commutator(L, centre);
    scale = std::max(max_entry(d), max_entry(L) * max_entry(centre));
    return axis == 0 ? v : Matrix(-v);
  };
}

MatrixField checked_step(const PathIntegrator& paths, const MatrixField& phi,
                         const Matrix& base, const ChiralOptions& options, int level,
                         IntegrationReport* report, double floor_scale = 0.0) {
  const NodeValues nv = paths.integrate(recursion_integrand(phi), base);
  if (report) *report = nv.report;
  check_paths(nv.report, options, "recursion_step", level, floor_scale);
  return MatrixField::tabulated(nv.table);
}

}  // namespace

double IntegrationReport::relative() const {
  const double denom = diameter * integrand_scale;
  return denom > 0.0 ? disagreement / denom : disagreement;
}

Matrix log_derivative(const MatrixField& g, const Point2& p, int axis, double h) {
  return checked_inverse(g(p), p) * partial(g, p, axis, h);
}

ResidualReport chiral_residual(const MatrixField& g, const Grid2D& grid) {
  const double h = grid.h;
  return residual_scan(
      [&](const Point2& p) {
        const Matrix gi = checked_inverse(g(p), p);
        const Matrix lx = gi * partial(g, p, 0, h);
        const Matrix lt = gi * partial(g, p, 1, h);
        const Matrix lap = second_partial(g, p, 0, h) + second_partial(g, p, 1, h);
        return max_entry(gi * lap - lx * lx - lt * lt);
      },
      grid);
}

ResidualReport symmetry_residual(const MatrixField& phi, const MatrixField& g,
                                 const Grid2D& grid) {
  if (phi.n() != g.n()) throw InvalidParameterError("symmetry_residual: dimension mismatch");
  const double h = grid.h;
  return residual_scan(
      [&](const Point2& p) {
        const Matrix lx = log_derivative(g, p, 0, h);
        const Matrix lt = log_derivative(g, p, 1, h);
        const Matrix r = second_partial(phi, p, 0, h) + second_partial(phi, p, 1, h) +
                         commutator(lx, partial(phi, p, 0, h)) +
                         commutator(lt, partial(phi, p, 1, h));
        return max_entry(r);
      },
      grid);
}

ResidualReport potential_residual(const MatrixField& X, const MatrixField& g,
                                  const Grid2D& grid) {
  if (X.n() != g.n()) throw InvalidParameterError("potential_residual: dimension mismatch");
  const double h = grid.h;
  return residual_scan(
      [&](const Point2& p) {
        const Matrix gi = checked_inverse(g(p), p);
        const Matrix ex = partial(X, p, 0, h) - gi * partial(g, p, 1, h);
        const Matrix et = partial(X, p, 1, h) + gi * partial(g, p, 0, h);
        return std::max(max_entry(ex), max_entry(et));
      },
      grid);
}

Potential potential(const MatrixField& g, const Grid2D& grid, const Matrix& base,
                    const ChiralOptions& options) {
  const PathIntegrator paths(g, grid, options.nodes);
  // X_x = L_t, X_t = -L_x; the cached L is already the other-axis derivative.
  const NodeValues nv = paths.integrate(
      [](int axis, const Point2&, const Matrix& L, double& scale) -> Matrix {
        scale = max_entry(L);
        return axis == 0 ? L : Matrix(-L);
      },
      zero_or(base, g.n()));
  check_paths(nv.report, options, "potential", -1);
  return Potential{MatrixField::tabulated(nv.table), nv.report};
}

MatrixField recursion_step(const MatrixField& phi, const MatrixField& g, const Grid2D& grid,
                           const Matrix& base, const ChiralOptions& options,
                           IntegrationReport* report) {
  if (phi.n() != g.n()) throw InvalidParameterError("recursion_step: dimension mismatch");
  const PathIntegrator paths(g, grid, options.nodes);
  return checked_step(paths, phi, zero_or(base, g.n()), options, -1, report);
}

std::vector<SymmetryCharacteristic> hierarchy(const MatrixField& g, const Matrix& M, int levels,
                                              const Grid2D& grid,
                                              const ChiralOptions& options) {
  if (levels < 1) throw InvalidParameterError("hierarchy: levels must be at least 1");
  const MatrixField seed = MatrixField::constant(M);
  if (seed.n() != g.n()) throw InvalidParameterError("hierarchy: dimension mismatch");

  const PathIntegrator paths(g, grid, options.nodes);
  std::vector<SymmetryCharacteristic> out;
  out.push_back({seed, 0, {}, symmetry_residual(seed, g, grid)});
  double floor_scale = 0.0;
  for (int level = 1; level <= levels; ++level) {
    IntegrationReport report;
    MatrixField next = checked_step(paths, out.back().phi, Matrix::Zero(g.n(), g.n()),
                                    options, level, &report, floor_scale);
    floor_scale = std::max(floor_scale, report.integrand_scale);
    ResidualReport sym = symmetry_residual(next, g, grid);
    out.push_back({std::move(next), level, report, std::move(sym)});
  }
  return out;
}

int polynomial_degree(const MatrixField& field, const Grid2D& grid, int max_degree,
                      double rel_tol) {
  grid.validate();
  const int n = field.n();
  const Eigen::Index points = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd Y(points, 2 * n * n);
  Eigen::VectorXd u(points), v(points);
  Eigen::Index row = 0;
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.nt; ++j, ++row) {
      const Matrix m = field(Point2{grid.x(i), grid.t(j)});
      for (int k = 0; k < n * n; ++k) {
        Y(row, 2 * k) = m(k).real();
        Y(row, 2 * k + 1) = m(k).imag();
      }
      // Fit in coordinates scaled to [-1, 1] for conditioning.
      u(row) = (2.0 * grid.x(i) - grid.x_min - grid.x_max) / (grid.x_max - grid.x_min);
      v(row) = (2.0 * grid.t(j) - grid.t_min - grid.t_max) / (grid.t_max - grid.t_min);
    }
  }
  const double peak = Y.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0;

  for (int d = 0; d <= max_degree; ++d) {
    std::vector<Eigen::VectorXd> cols;
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        cols.push_back(u.array().pow(a) * v.array().pow(b));
      }
    }
    Eigen::MatrixXd V(points, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) V.col(static_cast<Eigen::Index>(c)) = cols[c];
    const Eigen::MatrixXd coef = V.colPivHouseholderQr().solve(Y);
    if ((V * coef - Y).cwiseAbs().maxCoeff() <= rel_tol * peak) return d;
  }
  return -1;
}

}  // namespace btkit::chiral
