#include "btkit/classic_bts.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace btkit::classic {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw InvalidParameterError(std::string("parameter ") + name + " must be finite");
  }
}

// ---------------------------------------------------------------------------
// Bivariate polynomials in (x, y) whose coefficients are affine forms in the
// family parameters. Just enough algebra to substitute the parametric
// families into Cauchy-Riemann and read off one equation per monomial.

struct Affine {
  std::map<std::string, double> coeffs;
  double constant = 0.0;

  bool is_zero() const {
    return constant == 0.0 &&
           std::all_of(coeffs.begin(), coeffs.end(), [](const auto& kv) { return kv.second == 0.0; });
  }
};

Affine operator+(Affine a, const Affine& b) {
  for (const auto& [name, c] : b.coeffs) a.coeffs[name] += c;
  a.constant += b.constant;
  return a;
}

Affine operator*(double s, Affine a) {
  for (auto& [name, c] : a.coeffs) c *= s;
  a.constant *= s;
  return a;
}

Affine symbol(const std::string& name, double scale = 1.0) {
  Affine a;
  a.coeffs[name] = scale;
  return a;
}

using Monomial = std::pair<int, int>;  // powers of x and y
using Poly = std::map<Monomial, Affine>;

Poly add(Poly a, const Poly& b, double scale = 1.0) {
  for (const auto& [m, c] : b) a[m] = a[m] + scale * c;
  return a;
}

Poly diff(const Poly& p, int axis) {
  Poly out;
  for (const auto& [m, c] : p) {
    const int power = axis == 0 ? m.first : m.second;
    if (power == 0) continue;
    Monomial lowered = m;
    (axis == 0 ? lowered.first : lowered.second) -= 1;
    out[lowered] = out[lowered] + static_cast<double>(power) * c;
  }
  return out;
}

std::string monomial_name(const Monomial& m) {
  std::string s;
  auto term = [&s](const char* var, int p) {
    if (p == 0) return;
    if (!s.empty()) s += "*";
    s += var;
    if (p > 1) s += "^" + std::to_string(p);
  };
  term("x", m.first);
  term("y", m.second);
  return s.empty() ? "1" : s;
}

// Cauchy-Riemann residual polynomials u_x - v_y and u_y + v_x.
std::vector<LinearConstraint> cauchy_riemann_constraints(const Poly& u, const Poly& v) {
  const std::pair<const char*, Poly> equations[] = {
      {"u_x - v_y", add(diff(u, 0), diff(v, 1), -1.0)},
      {"u_y + v_x", add(diff(u, 1), diff(v, 0))},
  };
  std::vector<LinearConstraint> out;
  for (const auto& [name, poly] : equations) {
    for (const auto& [m, form] : poly) {
      if (form.is_zero()) continue;
      LinearConstraint c;
      c.equation = name;
      c.monomial = monomial_name(m);
      for (const auto& [sym, coef] : form.coeffs) {
        if (coef != 0.0) c.coeffs[sym] = coef;
      }
      c.constant = form.constant;
      out.push_back(std::move(c));
    }
  }
  return out;
}

struct LinearSolution {
  std::map<std::string, double> values;
  int rank = 0;
  bool consistent = true;
};

// Gauss-Jordan elimination over the named unknowns after substituting the
// known parameter values. Rows whose pivot is +-1 keep exact arithmetic.
LinearSolution solve_constraints(const std::vector<LinearConstraint>& constraints,
                                 const std::vector<std::string>& unknowns,
                                 const std::map<std::string, double>& known) {
  const std::size_t n = unknowns.size();
  std::vector<std::vector<double>> rows;
  for (const auto& c : constraints) {
    std::vector<double> row(n + 1, 0.0);
    double rhs = -c.constant;
    for (const auto& [sym, coef] : c.coeffs) {
      auto it = std::find(unknowns.begin(), unknowns.end(), sym);
      if (it != unknowns.end()) {
        row[static_cast<std::size_t>(it - unknowns.begin())] += coef;
      } else {
        rhs -= coef * known.at(sym);
      }
    }
    row[n] = rhs;
    rows.push_back(std::move(row));
  }

  LinearSolution sol;
  std::vector<int> pivot_col_of_row;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
    std::size_t best = r;
    for (std::size_t i = r; i < rows.size(); ++i) {
      if (std::abs(rows[i][col]) > std::abs(rows[best][col])) best = i;
    }
    if (rows[best][col] == 0.0) continue;
    std::swap(rows[r], rows[best]);
    const double piv = rows[r][col];
    for (auto& v : rows[r]) v /= piv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0.0) continue;
      const double f = rows[i][col];
      for (std::size_t k = 0; k <= n; ++k) rows[i][k] -= f * rows[r][k];
    }
    pivot_col_of_row.push_back(static_cast<int>(col));
    ++r;
  }
  sol.rank = static_cast<int>(r);
  for (std::size_t i = r; i < rows.size(); ++i) {
    if (rows[i][n] != 0.0) sol.consistent = false;
  }
  // Free unknowns default to zero.
  for (const auto& u : unknowns) sol.values[u] = 0.0;
  for (std::size_t i = 0; i < r; ++i) sol.values[unknowns[pivot_col_of_row[i]]] = rows[i][n];
  return sol;
}

double residual_sum(const LinearConstraint& c, const std::map<std::string, double>& values) {
  double s = c.constant;
  for (const auto& [sym, coef] : c.coeffs) s += coef * values.at(sym);
  return s;
}

}  // namespace

ScalarField2D::ScalarField2D(Family family) : family_(std::move(family)) {
  std::visit(Overloaded{
                 [](const Zero&) {},
                 [](const HarmonicQuadratic& f) {
                   require_finite(f.alpha, "alpha");
                   require_finite(f.beta, "beta");
                   require_finite(f.gamma, "gamma");
                   require_finite(f.offset, "offset");
                 },
                 [](const HarmonicConjugateQuadratic& f) {
                   require_finite(f.kappa, "kappa");
                   require_finite(f.lambda, "lambda");
                   require_finite(f.mu, "mu");
                 },
                 [](const MonomialXY& f) { require_finite(f.coefficient, "coefficient"); },
                 [](const LiouvilleSoliton& f) { require_finite(f.C, "C"); },
                 [](const SineGordonKink& f) {
                   require_finite(f.a, "a");
                   require_finite(f.C, "C");
                   if (f.a == 0.0) {
                     throw InvalidParameterError("sine-Gordon BT parameter a must be nonzero");
                   }
                 },
             },
             family_);
}

double ScalarField2D::operator()(double x, double t) const {
  return std::visit(
      Overloaded{
          [](const Zero&) { return 0.0; },
          [&](const HarmonicQuadratic& f) {
            return f.alpha * (x * x - t * t) + f.beta * x + f.gamma * t + f.offset;
          },
          [&](const HarmonicConjugateQuadratic& f) {
            return f.kappa * x * t + f.lambda * x + f.mu * t;
          },
          [&](const MonomialXY& f) { return f.coefficient * x * t; },
          [&](const LiouvilleSoliton& f) {
            const double arg = f.C - (x + t) / kSqrt2;
            if (!(arg > 0.0)) {
              throw SingularPointError("Liouville soliton: log argument C - (x+t)/sqrt2 <= 0",
                                       {x, t});
            }
            return -2.0 * std::log(arg);
          },
          [&](const SineGordonKink& f) {
            return 4.0 * std::atan(f.C * std::exp(f.a * x + t / f.a));
          },
      },
      family_);
}

std::string ScalarField2D::family_name() const {
  return std::visit(Overloaded{
                        [](const Zero&) { return std::string("Zero"); },
                        [](const HarmonicQuadratic&) { return std::string("HarmonicQuadratic"); },
                        [](const HarmonicConjugateQuadratic&) {
                          return std::string("HarmonicConjugateQuadratic");
                        },
                        [](const MonomialXY&) { return std::string("MonomialXY"); },
                        [](const LiouvilleSoliton&) { return std::string("LiouvilleSoliton"); },
                        [](const SineGordonKink&) { return std::string("SineGordonKink"); },
                    },
                    family_);
}

std::vector<std::pair<std::string, double>> ScalarField2D::params() const {
  using P = std::vector<std::pair<std::string, double>>;
  return std::visit(
      Overloaded{
          [](const Zero&) { return P{}; },
          [](const HarmonicQuadratic& f) {
            return P{{"alpha", f.alpha}, {"beta", f.beta}, {"gamma", f.gamma}, {"offset", f.offset}};
          },
          [](const HarmonicConjugateQuadratic& f) {
            return P{{"kappa", f.kappa}, {"lambda", f.lambda}, {"mu", f.mu}};
          },
          [](const MonomialXY& f) { return P{{"coefficient", f.coefficient}}; },
          [](const LiouvilleSoliton& f) { return P{{"C", f.C}}; },
          [](const SineGordonKink& f) { return P{{"a", f.a}, {"C", f.C}}; },
      },
      family_);
}

ScalarField2D ScalarField2D::from_params(const std::string& family,
                                         const std::map<std::string, double>& params) {
  auto get = [&](const char* key, std::optional<double> fallback = std::nullopt) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw InvalidParameterError("field family " + family + ": missing parameter '" + key + "'");
  };
  if (family == "Zero") return ScalarField2D(Zero{});
  if (family == "HarmonicQuadratic") {
    return ScalarField2D(
        HarmonicQuadratic{get("alpha"), get("beta"), get("gamma"), get("offset", 0.0)});
  }
  if (family == "HarmonicConjugateQuadratic") {
    return ScalarField2D(HarmonicConjugateQuadratic{get("kappa"), get("lambda"), get("mu")});
  }
  if (family == "MonomialXY") return ScalarField2D(MonomialXY{get("coefficient")});
  if (family == "LiouvilleSoliton") return ScalarField2D(LiouvilleSoliton{get("C")});
  if (family == "SineGordonKink") return ScalarField2D(SineGordonKink{get("a"), get("C")});
  throw InvalidParameterError("unknown scalar field family '" + family + "'");
}

std::string LinearConstraint::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [sym, coef] : coeffs) {
    if (!first) os << (coef < 0 ? " - " : " + ");
    else if (coef < 0) os << "-";
    const double mag = std::abs(coef);
    if (mag != 1.0) os << mag << "*";
    os << sym;
    first = false;
  }
  if (constant != 0.0 || first) {
    if (!first) os << (constant < 0 ? " - " : " + ") << std::abs(constant);
    else os << constant;
  }
  os << " = 0  [" << equation << ", coefficient of " << monomial << "]";
  return os.str();
}

ConjugatePair harmonic_conjugate_match(double alpha, double beta, double gamma) {
  Poly u;
  u[{2, 0}] = symbol("alpha");
  u[{0, 2}] = symbol("alpha", -1.0);
  u[{1, 0}] = symbol("beta");
  u[{0, 1}] = symbol("gamma");
  Poly v;
  v[{1, 1}] = symbol("kappa");
  v[{1, 0}] = symbol("lambda");
  v[{0, 1}] = symbol("mu");

  ConjugatePair pair;
  pair.constraints = cauchy_riemann_constraints(u, v);
  const auto sol = solve_constraints(pair.constraints, {"kappa", "lambda", "mu"},
                                     {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}});
  pair.kappa = sol.values.at("kappa");
  pair.lambda = sol.values.at("lambda");
  pair.mu = sol.values.at("mu");
  pair.u = ScalarField2D(HarmonicQuadratic{alpha, beta, gamma, 0.0});
  pair.v = ScalarField2D(HarmonicConjugateQuadratic{pair.kappa, pair.lambda, pair.mu});
  return pair;
}

MatchResult xy_family_match(double alpha, double beta) {
  Poly u;
  u[{1, 1}] = symbol("alpha");
  Poly v;
  v[{1, 1}] = symbol("beta");

  MatchResult result;
  result.constraints = cauchy_riemann_constraints(u, v);
  const std::vector<std::string> unknowns{"alpha", "beta"};
  const auto homogeneous = solve_constraints(result.constraints, unknowns, {});
  result.trivial_only = homogeneous.rank == static_cast<int>(unknowns.size());

  const std::map<std::string, double> given{{"alpha", alpha}, {"beta", beta}};
  result.conjugate = std::all_of(result.constraints.begin(), result.constraints.end(),
                                 [&](const LinearConstraint& c) { return residual_sum(c, given) == 0.0; });
  result.u = ScalarField2D(MonomialXY{alpha});
  result.v = ScalarField2D(MonomialXY{beta});
  return result;
}

ScalarField2D liouville_from_trivial(double C) { return ScalarField2D(LiouvilleSoliton{C}); }

ScalarField2D sine_gordon_from_vacuum(double a, double C) {
  return ScalarField2D(SineGordonKink{a, C});
}

ResidualReport bt_residual_cr(const ScalarField2D& u, const ScalarField2D& v, const Grid2D& grid) {
  const double h = grid.h;
  return residual_scan(
      [&](const Point2& p) {
        const double ux = partial(u, p, 0, h), uy = partial(u, p, 1, h);
        const double vx = partial(v, p, 0, h), vy = partial(v, p, 1, h);
        return std::max(std::abs(ux - vy), std::abs(uy + vx));
      },
      grid);
}

ResidualReport bt_residual_liouville(const ScalarField2D& u, const ScalarField2D& v,
                                     const Grid2D& grid) {
  const double h = grid.h;
  return residual_scan(
      [&](const Point2& p) {
        const double uu = u(p), vv = v(p);
        const double ux = partial(u, p, 0, h), ut = partial(u, p, 1, h);
        const double vx = partial(v, p, 0, h), vt = partial(v, p, 1, h);
        const double ra = ux + vx - kSqrt2 * std::exp((uu - vv) / 2.0);
        const double rb = ut - vt - kSqrt2 * std::exp((uu + vv) / 2.0);
        return std::max(std::abs(ra), std::abs(rb));
      },
      grid);
}

ResidualReport bt_residual_sine_gordon(const ScalarField2D& u, const ScalarField2D& v, double a,
                                       const Grid2D& grid) {
  if (a == 0.0 || !std::isfinite(a)) {
    throw InvalidParameterError("sine-Gordon BT parameter a must be nonzero");
  }
  const double h = grid.h;
  return residual_scan(
      [&](const Point2& p) {
        const double uu = u(p), vv = v(p);
        const double ux = partial(u, p, 0, h), ut = partial(u, p, 1, h);
        const double vx = partial(v, p, 0, h), vt = partial(v, p, 1, h);
        const double ra = 0.5 * (ux + vx) - a * std::sin((uu - vv) / 2.0);
        const double rb = 0.5 * (ut - vt) - std::sin((uu + vv) / 2.0) / a;
        return std::max(std::abs(ra), std::abs(rb));
      },
      grid);
}

ResidualReport laplace_residual(const ScalarField2D& w, const Grid2D& grid) {
  const double h = grid.h;
  return residual_scan(
      [&](const Point2& p) { return second_partial(w, p, 0, h) + second_partial(w, p, 1, h); },
      grid);
}

ResidualReport liouville_residual(const ScalarField2D& u, const Grid2D& grid) {
  const double h = grid.h;
  return residual_scan(
      [&](const Point2& p) { return mixed_partial(u, p, 0, 1, h) - std::exp(u(p)); }, grid);
}

ResidualReport sine_gordon_residual(const ScalarField2D& u, const Grid2D& grid) {
  const double h = grid.h;
  return residual_scan(
      [&](const Point2& p) { return mixed_partial(u, p, 0, 1, h) - std::sin(u(p)); }, grid);
}

ResidualReport free_wave_residual(const ScalarField2D& v, const Grid2D& grid) {
  const double h = grid.h;
  return residual_scan([&](const Point2& p) { return mixed_partial(v, p, 0, 1, h); }, grid);
}

}  // namespace btkit::classic
