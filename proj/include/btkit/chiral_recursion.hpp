#pragma once

// Chiral field equation (g^-1 g_x)_x + (g^-1 g_t)_t = 0, its symmetry
// condition, the potential X and the recursion operator acting on symmetry
// characteristics Q = g Phi.

#include <vector>

#include "btkit/matrix_field.hpp"
#include "btkit/verify.hpp"

namespace btkit::chiral {

struct ChiralOptions {
  int nodes = 21;               // Chebyshev nodes per axis for integrated fields
  double path_tolerance = 1e-6; // relative to grid diameter * integrand scale
};

/// Agreement of the x-then-t and t-then-x line integrals on the nodes.
struct IntegrationReport {
  double disagreement = 0.0;     // max |entry| of the difference
  double integrand_scale = 0.0;  // max |entry| of the integrand's terms on the paths
  double diameter = 0.0;

  /// disagreement / (diameter * integrand_scale), 0 for a vanishing integrand.
  double relative() const;
};

struct Potential {
  MatrixField X;
  IntegrationReport integration;
};

struct SymmetryCharacteristic {
  MatrixField phi;
  int level = 0;
  IntegrationReport integration;  // empty for level 0
  ResidualReport symmetry;

  /// Q = g Phi
  Matrix Q(const MatrixField& g, const Point2& p) const { return g(p) * phi(p); }
};

/// g^-1 dg along axis 0 (x) or 1 (t) by central differences.
Matrix log_derivative(const MatrixField& g, const Point2& p, int axis, double h);

/// max |entry| of g^-1(g_xx + g_tt) - (g^-1 g_x)^2 - (g^-1 g_t)^2, which
/// equals (g^-1 g_x)_x + (g^-1 g_t)_t.
ResidualReport chiral_residual(const MatrixField& g, const Grid2D& grid);

/// max |entry| of Phi_xx + Phi_tt + [g^-1 g_x, Phi_x] + [g^-1 g_t, Phi_t].
ResidualReport symmetry_residual(const MatrixField& phi, const MatrixField& g,
                                 const Grid2D& grid);

/// max |entry| over |X_x - g^-1 g_t| and |X_t + g^-1 g_x|.
ResidualReport potential_residual(const MatrixField& X, const MatrixField& g, const Grid2D& grid);

/// X with X_x = g^-1 g_t, X_t = -g^-1 g_x and X(anchor) = base, where the
/// anchor is (0, 0) clamped into the grid box. An empty base means zero.
/// Throws PathDependenceError when g does not solve the chiral equation.
Potential potential(const MatrixField& g, const Grid2D& grid, const Matrix& base = Matrix(),
                    const ChiralOptions& options = {});

/// Phi' with Phi'_x = Phi_t + [g^-1 g_t, Phi], Phi'_t = -(Phi_x + [g^-1 g_x, Phi]).
MatrixField recursion_step(const MatrixField& phi, const MatrixField& g, const Grid2D& grid,
                           const Matrix& base = Matrix(), const ChiralOptions& options = {},
                           IntegrationReport* report = nullptr);

/// [Phi^0 = M, Phi^1, ..., Phi^levels] with zero integration constants. Each
/// entry carries its symmetry residual on the grid. A path-dependence failure
/// is rethrown with the failing level.
std::vector<SymmetryCharacteristic> hierarchy(const MatrixField& g, const Matrix& M, int levels,
                                              const Grid2D& grid,
                                              const ChiralOptions& options = {});

/// Smallest total degree d <= max_degree such that a least-squares fit of
/// every entry by polynomials in (x, t) of degree d leaves a residual below
/// rel_tol * max |entry|. Returns -1 when none fits, 0 for a zero field.
int polynomial_degree(const MatrixField& field, const Grid2D& grid, int max_degree = 6,
                      double rel_tol = 1e-8);

}  // namespace btkit::chiral
