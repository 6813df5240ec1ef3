#pragma once

// Complex n x n matrix fields over (x, t): exponential seeds, constants and
// Chebyshev-tabulated fields.

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "btkit/verify.hpp"

namespace btkit::chiral {

using Matrix = Eigen::MatrixXcd;

/// max |entry|
double max_entry(const Matrix& m);

Matrix commutator(const Matrix& a, const Matrix& b);

/// exp(M) by scaling and squaring with a Pade approximant.
Matrix expm(const Matrix& m);

/// Inverse by partial-pivot LU. Throws SingularPointError at p when the
/// reciprocal condition estimate falls below 1e-12.
Matrix checked_inverse(const Matrix& m, const Point2& p);

/// Tensor Chebyshev-Lobatto samples on a box with 2D barycentric
/// interpolation. Evaluation outside the box continues the interpolating
/// polynomial, which keeps stencils at the box edge well defined.
class ChebyshevTable {
 public:
  ChebyshevTable(double x_min, double x_max, double t_min, double t_max, int nx, int nt, int n);

  static std::vector<double> nodes(double lo, double hi, int count);

  int n() const { return n_; }
  int nx() const { return static_cast<int>(xs_.size()); }
  int nt() const { return static_cast<int>(ts_.size()); }
  const std::vector<double>& x_nodes() const { return xs_; }
  const std::vector<double>& t_nodes() const { return ts_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }

  Matrix sample(int i, int j) const;
  void set_sample(int i, int j, const Matrix& value);

  Matrix operator()(const Point2& p) const;

  /// Table of the interpolant's exact derivative along axis 0 (x) or 1 (t),
  /// via the differentiation matrix on the nodes.
  std::shared_ptr<const ChebyshevTable> derivative(int axis) const;

 private:
  static std::vector<double> weights(int count);
  static Eigen::MatrixXd differentiation(const std::vector<double>& nodes,
                                         const std::vector<double>& w);
  static Eigen::VectorXd basis(const std::vector<double>& nodes, const std::vector<double>& w,
                               double s);

  int n_;
  double x_min_, x_max_, t_min_, t_max_;
  std::vector<double> xs_, ts_, wx_, wt_;
  // Column i + nx * j holds sample (i, j) flattened column-major.
  Eigen::MatrixXcd values_;
};

struct ExpSeed {
  Matrix A;
  Matrix B;
};

struct Constant {
  Matrix M;
};

struct Tabulated {
  std::shared_ptr<const ChebyshevTable> table;
  std::shared_ptr<const ChebyshevTable> dx, dt;
};

class MatrixField {
 public:
  using Family = std::variant<ExpSeed, Constant, Tabulated>;

  /// g = exp(Ax + Bt). Throws NonCommutingError unless max|[A, B]| <= 1e-12.
  static MatrixField exp_seed(const Matrix& A, const Matrix& B);
  static MatrixField constant(const Matrix& M);
  static MatrixField tabulated(std::shared_ptr<const ChebyshevTable> table);
  /// Sample f on Chebyshev nodes covering the grid box.
  static MatrixField tabulate(const std::function<Matrix(const Point2&)>& f, int n,
                              const Grid2D& box, int nodes = 21);

  Matrix operator()(const Point2& p) const;
  /// Exact first derivative along axis 0 (x) or 1 (t): A g or B g for
  /// ExpSeed, zero for Constant, the interpolant's derivative for Tabulated.
  Matrix partial(const Point2& p, int axis) const;
  int n() const { return n_; }
  const Family& family() const { return family_; }
  std::string family_name() const;

 private:
  MatrixField(Family family, int n) : family_(std::move(family)), n_(n) {}

  Family family_;
  int n_;
};

}  // namespace btkit::chiral
