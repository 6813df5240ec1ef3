#include "btkit/matrix_field.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace btkit::chiral {

double max_entry(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix expm(const Matrix& m) { return m.exp(); }

Matrix checked_inverse(const Matrix& m, const Point2& p) {
  Eigen::PartialPivLU<Matrix> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond >= 1e-12)) {
    std::ostringstream msg;
    msg << "matrix field is singular at (x, t) = (" << p[0] << ", " << p[1]
        << "), reciprocal condition " << rcond;
    throw SingularPointError(msg.str(), {p[0], p[1]});
  }
  return lu.inverse();
}

// ---------------------------------------------------------------------------

ChebyshevTable::ChebyshevTable(double x_min, double x_max, double t_min, double t_max, int nx,
                               int nt, int n)
    : n_(n), x_min_(x_min), x_max_(x_max), t_min_(t_min), t_max_(t_max) {
  if (n < 1) throw InvalidParameterError("matrix dimension must be at least 1");
  if (nx < 2 || nt < 2) throw InvalidParameterError("Chebyshev table needs at least 2 nodes per axis");
  if (!(x_min < x_max) || !(t_min < t_max)) {
    throw InvalidParameterError("Chebyshev table: require min < max on both axes");
  }
  xs_ = nodes(x_min, x_max, nx);
  ts_ = nodes(t_min, t_max, nt);
  wx_ = weights(nx);
  wt_ = weights(nt);
  values_ = Eigen::MatrixXcd::Zero(n * n, nx * nt);
}

std::vector<double> ChebyshevTable::nodes(double lo, double hi, int count) {
  // Ascending, symmetric about the midpoint, exact centre for odd counts.
  std::vector<double> out(count);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int j = 0; j < count; ++j) {
    const double s = std::sin(std::numbers::pi * (2 * j - (count - 1)) / (2.0 * (count - 1)));
    out[j] = mid + half * s;
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> ChebyshevTable::weights(int count) {
  std::vector<double> w(count);
  for (int j = 0; j < count; ++j) w[j] = (j % 2 == 0) ? 1.0 : -1.0;
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

Eigen::VectorXd ChebyshevTable::basis(const std::vector<double>& nodes,
                                      const std::vector<double>& w, double s) {
  const int count = static_cast<int>(nodes.size());
  Eigen::VectorXd c(count);
  for (int j = 0; j < count; ++j) {
    const double d = s - nodes[j];
    if (d == 0.0) {
      c.setZero();
      c(j) = 1.0;
      return c;
    }
    c(j) = w[j] / d;
  }
  return c / c.sum();
}

Matrix ChebyshevTable::sample(int i, int j) const {
  const Eigen::VectorXcd col = values_.col(i + nx() * j);
  return Eigen::Map<const Matrix>(col.data(), n_, n_);
}

void ChebyshevTable::set_sample(int i, int j, const Matrix& value) {
  if (value.rows() != n_ || value.cols() != n_) {
    throw InvalidParameterError("Chebyshev table: sample has the wrong dimension");
  }
  values_.col(i + nx() * j) = Eigen::Map<const Eigen::VectorXcd>(value.data(), n_ * n_);
}

Matrix ChebyshevTable::operator()(const Point2& p) const {
  const Eigen::VectorXd cx = basis(xs_, wx_, p[0]);
  const Eigen::VectorXd ct = basis(ts_, wt_, p[1]);
  Eigen::VectorXcd w(nx() * nt());
  for (int j = 0; j < nt(); ++j) w.segment(j * nx(), nx()) = (ct(j) * cx).cast<std::complex<double>>();
  const Eigen::VectorXcd flat = values_ * w;
  return Eigen::Map<const Matrix>(flat.data(), n_, n_);
}

Eigen::MatrixXd ChebyshevTable::differentiation(const std::vector<double>& nodes,
                                                const std::vector<double>& w) {
  const int count = static_cast<int>(nodes.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(count, count);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      if (i != j) {
        D(i, j) = (w[j] / w[i]) / (nodes[i] - nodes[j]);
        D(i, i) -= D(i, j);
      }
    }
  }
  return D;
}

std::shared_ptr<const ChebyshevTable> ChebyshevTable::derivative(int axis) const {
  auto out = std::make_shared<ChebyshevTable>(*this);
  if (axis == 0) {
    const Eigen::MatrixXd D = differentiation(xs_, wx_);
    for (int j = 0; j < nt(); ++j) {
      out->values_.middleCols(j * nx(), nx()) =
          values_.middleCols(j * nx(), nx()) * D.transpose().cast<std::complex<double>>();
    }
  } else {
    const Eigen::MatrixXd D = differentiation(ts_, wt_);
    for (int i = 0; i < nx(); ++i) {
      for (int j = 0; j < nt(); ++j) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(n_ * n_);
        for (int k = 0; k < nt(); ++k) acc += D(j, k) * values_.col(i + nx() * k);
        out->values_.col(i + nx() * j) = acc;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

MatrixField MatrixField::exp_seed(const Matrix& A, const Matrix& B) {
  if (A.rows() < 1 || A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols()) {
    throw InvalidParameterError("ExpSeed: A and B must be square matrices of equal size");
  }
  const double c = max_entry(commutator(A, B));
  if (c > 1e-12) {
    std::ostringstream msg;
    msg << "ExpSeed: A and B do not commute, max|[A, B]| = " << c;
    throw NonCommutingError(msg.str(), c);
  }
  return MatrixField(ExpSeed{A, B}, static_cast<int>(A.rows()));
}

MatrixField MatrixField::constant(const Matrix& M) {
  if (M.rows() < 1 || M.rows() != M.cols()) {
    throw InvalidParameterError("Constant: matrix must be square and non-empty");
  }
  return MatrixField(Constant{M}, static_cast<int>(M.rows()));
}

MatrixField MatrixField::tabulated(std::shared_ptr<const ChebyshevTable> table) {
  if (!table) throw InvalidParameterError("Tabulated: null table");
  const int n = table->n();
  auto dx = table->derivative(0), dt = table->derivative(1);
  return MatrixField(Tabulated{std::move(table), std::move(dx), std::move(dt)}, n);
}

MatrixField MatrixField::tabulate(const std::function<Matrix(const Point2&)>& f, int n,
                                  const Grid2D& box, int nodes) {
  auto table = std::make_shared<ChebyshevTable>(box.x_min, box.x_max, box.t_min, box.t_max,
                                                nodes, nodes, n);
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      table->set_sample(i, j, f(Point2{table->x_nodes()[i], table->t_nodes()[j]}));
    }
  }
  return tabulated(std::move(table));
}

Matrix MatrixField::operator()(const Point2& p) const {
  struct Visitor {
    const Point2& p;
    Matrix operator()(const ExpSeed& e) const { return expm(e.A * p[0] + e.B * p[1]); }
    Matrix operator()(const Constant& c) const { return c.M; }
    Matrix operator()(const Tabulated& t) const { return (*t.table)(p); }
  };
  return std::visit(Visitor{p}, family_);
}

Matrix MatrixField::partial(const Point2& p, int axis) const {
  if (axis != 0 && axis != 1) throw InvalidParameterError("MatrixField::partial: axis must be 0 or 1");
  struct Visitor {
    const Point2& p;
    int axis;
    Matrix operator()(const ExpSeed& e) const {
      return (axis == 0 ? e.A : e.B) * expm(e.A * p[0] + e.B * p[1]);
    }
    Matrix operator()(const Constant& c) const { return Matrix::Zero(c.M.rows(), c.M.cols()); }
    Matrix operator()(const Tabulated& t) const { return (*(axis == 0 ? t.dx : t.dt))(p); }
  };
  return std::visit(Visitor{p, axis}, family_);
}

std::string MatrixField::family_name() const {
  static const char* names[] = {"exp_seed", "constant", "tabulated"};
  return names[family_.index()];
}

}  // namespace btkit::chiral
