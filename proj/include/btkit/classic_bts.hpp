#pragma once

// Classical Backlund transformations in two variables: Cauchy-Riemann
// (auto-BT for Laplace), the Liouville BT, and the sine-Gordon auto-BT.
// Fields are closed-form families; the Laplace variable y is stored as t.

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "btkit/verify.hpp"

namespace btkit::classic {

struct HarmonicQuadratic {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double offset = 0.0;  // the additive integration constant
};
/// kappa*x*y + lambda*x + mu*y
struct HarmonicConjugateQuadratic {
  double kappa = 0.0, lambda = 0.0, mu = 0.0;
};
struct MonomialXY {
  double coefficient = 0.0;
};
/// -2 ln(C - (x + t)/sqrt 2); singular where the log argument is <= 0.
struct LiouvilleSoliton {
  double C = 1.0;
};
/// 4 arctan(C exp(a x + t / a)), a != 0.
struct SineGordonKink {
  double a = 1.0, C = 1.0;
};
struct Zero {};

class ScalarField2D {
 public:
  using Family = std::variant<Zero, HarmonicQuadratic, HarmonicConjugateQuadratic, MonomialXY,
                              LiouvilleSoliton, SineGordonKink>;

  ScalarField2D() = default;
  /// Throws InvalidParameterError for SineGordonKink with a == 0 or
  /// non-finite parameters.
  explicit ScalarField2D(Family family);

  /// Throws SingularPointError outside the family's domain.
  double operator()(double x, double t) const;
  double operator()(const Point2& p) const { return (*this)(p[0], p[1]); }

  const Family& family() const noexcept { return family_; }
  std::string family_name() const;
  /// Parameters in declaration order, for serialization.
  std::vector<std::pair<std::string, double>> params() const;

  /// Inverse of family_name()/params(). Unknown names or missing parameters
  /// raise InvalidParameterError.
  static ScalarField2D from_params(const std::string& family,
                                   const std::map<std::string, double>& params);

 private:
  Family family_;
};

/// sum_i coeffs[i] * p_i + constant = 0, one per monomial coefficient of a
/// BT equation after substituting the parametric families.
struct LinearConstraint {
  std::string equation;  // e.g. "u_x - v_y"
  std::string monomial;  // e.g. "x", "1", "x*y"
  std::map<std::string, double> coeffs;
  double constant = 0.0;

  std::string to_string() const;
};

struct ConjugatePair {
  ScalarField2D u;
  ScalarField2D v;
  double kappa = 0.0, lambda = 0.0, mu = 0.0;
  std::vector<LinearConstraint> constraints;
};

/// u = alpha(x^2 - y^2) + beta x + gamma y matched to v = kappa xy + lambda x + mu y
/// by substituting both into the Cauchy-Riemann system and solving the
/// coefficient equations for (kappa, lambda, mu).
ConjugatePair harmonic_conjugate_match(double alpha, double beta, double gamma);

struct MatchResult {
  bool conjugate = false;     // the given (alpha, beta) satisfy every constraint
  bool trivial_only = false;  // the homogeneous constraint system forces all parameters to 0
  std::vector<LinearConstraint> constraints;
  ScalarField2D u;
  ScalarField2D v;
};

/// u = alpha xy, v = beta xy against Cauchy-Riemann.
MatchResult xy_family_match(double alpha, double beta);

ScalarField2D liouville_from_trivial(double C);
ScalarField2D sine_gordon_from_vacuum(double a, double C);

// BT residuals: pointwise max over both equations of the system.
ResidualReport bt_residual_cr(const ScalarField2D& u, const ScalarField2D& v, const Grid2D& grid);
ResidualReport bt_residual_liouville(const ScalarField2D& u, const ScalarField2D& v,
                                     const Grid2D& grid);
ResidualReport bt_residual_sine_gordon(const ScalarField2D& u, const ScalarField2D& v, double a,
                                       const Grid2D& grid);

// Target-PDE residuals.
ResidualReport laplace_residual(const ScalarField2D& w, const Grid2D& grid);
ResidualReport liouville_residual(const ScalarField2D& u, const Grid2D& grid);
ResidualReport sine_gordon_residual(const ScalarField2D& u, const Grid2D& grid);
/// v_xt = 0, the partner equation of the Liouville BT.
ResidualReport free_wave_residual(const ScalarField2D& v, const Grid2D& grid);

}  // namespace btkit::classic
