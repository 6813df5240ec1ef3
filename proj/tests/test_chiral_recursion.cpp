#include <doctest.h>

#include <complex>
#include <random>

#include "btkit/chiral_recursion.hpp"
#include "chiral_test_support.hpp"

using namespace btkit;
using namespace btkit::chiral;
using btkit::testing::random_commuting_pair;
using btkit::testing::random_matrix;

namespace {

using cd = std::complex<double>;

const Grid2D kGrid = Grid2D::square(-1.0, 1.0, 41);

// Max |entry| of field - oracle over a set of off-node sample points.
double max_deviation(const MatrixField& field, const std::function<Matrix(const Point2&)>& oracle,
                     const Grid2D& box = kGrid) {
  double worst = 0.0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> X(box.x_min, box.x_max), T(box.t_min, box.t_max);
  for (int k = 0; k < 200; ++k) {
    const Point2 p{X(rng), T(rng)};
    worst = std::max(worst, (field(p) - oracle(p)).cwiseAbs().maxCoeff());
  }
  return worst;
}

Matrix level1(const Matrix& A, const Matrix& B, const Matrix& M, const Point2& p) {
  const Matrix X = B * p[0] - A * p[1];
  return X * M - M * X;
}

Matrix br(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// Level 2 integrated by hand from the level-1 closed form.
Matrix level2(const Matrix& A, const Matrix& B, const Matrix& M, const Point2& p) {
  const double x = p[0], t = p[1];
  return -x * br(A, M) - t * br(B, M) + 0.5 * x * x * br(B, br(B, M)) -
         x * t * br(A, br(B, M)) + 0.5 * t * t * br(A, br(A, M));
}

}  // namespace

TEST_CASE("ExpSeed: evaluation, commutation check, family") {
  Matrix A(2, 2), B(2, 2);
  A << 1, 0, 0, -1;
  B << 2, 0, 0, -2;
  const auto g = MatrixField::exp_seed(A, B);
  CHECK(g.family_name() == "exp_seed");
  CHECK(g.n() == 2);
  const Matrix v = g(Point2{0.3, 0.1});
  CHECK(std::abs(v(0, 0) - std::exp(0.5)) < 1e-14);
  CHECK(std::abs(v(1, 1) - std::exp(-0.5)) < 1e-14);
  CHECK(std::abs(v(0, 1)) == 0.0);

  Matrix N(2, 2);
  N << 0, 1, 0, 0;
  CHECK_THROWS_AS(MatrixField::exp_seed(A, N), NonCommutingError);
  try {
    MatrixField::exp_seed(A, N);
  } catch (const NonCommutingError& e) {
    CHECK(e.commutator_norm() == doctest::Approx(2.0));
  }
  CHECK_THROWS_AS(MatrixField::exp_seed(A, Matrix::Zero(3, 3)), InvalidParameterError);
}

TEST_CASE("expm agrees with a Taylor series oracle") {
  std::mt19937_64 rng(3);
  for (int n : {1, 2, 3, 4}) {
    const Matrix m = random_matrix(rng, n, 0.7);
    Matrix sum = Matrix::Identity(n, n), term = Matrix::Identity(n, n);
    for (int k = 1; k < 40; ++k) {
      term = term * m / static_cast<double>(k);
      sum += term;
    }
    CHECK((expm(m) - sum).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("checked_inverse: singular matrix reports the point") {
  Matrix s(2, 2);
  s << 1, 2, 2, 4;
  try {
    checked_inverse(s, Point2{0.25, -0.5});
    FAIL("expected SingularPointError");
  } catch (const SingularPointError& e) {
    CHECK(e.point() == std::vector<double>{0.25, -0.5});
  }
  const Matrix m = Matrix::Identity(3, 3) * cd(0, 2);
  CHECK((checked_inverse(m, Point2{0, 0}) * m - Matrix::Identity(3, 3)).norm() < 1e-15);
}

TEST_CASE("Chebyshev table reproduces polynomials and smooth functions") {
  auto f = [](const Point2& p) {
    Matrix m(2, 2);
    m << p[0] * p[0] * p[1], cd(0, 1) * p[1], 1.0 - p[0], cd(p[0], p[1] * p[1] * p[1]);
    return m;
  };
  const auto poly = MatrixField::tabulate(f, 2, kGrid, 9);
  CHECK(poly.family_name() == "tabulated");
  CHECK(max_deviation(poly, f) < 1e-13);

  auto smooth = [](const Point2& p) {
    Matrix m(1, 1);
    m(0, 0) = std::exp(p[0]) * std::sin(2 * p[1]);
    return m;
  };
  CHECK(max_deviation(MatrixField::tabulate(smooth, 1, kGrid, 25), smooth) < 1e-12);

  const auto nodes = ChebyshevTable::nodes(-1, 1, 21);
  CHECK(nodes.front() == -1.0);
  CHECK(nodes[10] == 0.0);
  CHECK(nodes.back() == 1.0);
}

TEST_CASE("chiral_residual: ExpSeed solves, identity trivially, exp(A x^2) does not") {
  std::mt19937_64 rng(11);
  for (int n : {2, 3}) {
    const auto [A, B] = random_commuting_pair(rng, n);
    CHECK(chiral_residual(MatrixField::exp_seed(A, B), kGrid).max_abs < 1e-6);
  }
  CHECK(chiral_residual(MatrixField::constant(Matrix::Identity(2, 2)), kGrid).max_abs == 0.0);

  Matrix A(2, 2);
  A << 0.5, 0.2, 0.0, -0.3;
  const auto g = MatrixField::tabulate([&](const Point2& p) { return expm(A * p[0] * p[0]); }, 2,
                                       kGrid, 25);
  // (g^-1 g_x)_x = 2A everywhere.
  CHECK(chiral_residual(g, kGrid).max_abs == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("chiral_residual: singular samples are excluded and counted") {
  const auto zero = MatrixField::constant(Matrix::Zero(2, 2));
  CHECK_THROWS_AS(chiral_residual(zero, kGrid), EmptyDomainError);
  // diag(x, 1) is singular on the x = 0 column only.
  const auto g = MatrixField::tabulate(
      [](const Point2& p) {
        Matrix m = Matrix::Identity(2, 2);
        m(0, 0) = p[0];
        return m;
      },
      2, kGrid, 5);
  const auto r = chiral_residual(g, kGrid);
  CHECK(r.n_singular == 41);
  CHECK(r.n_points == 41 * 40);
}

TEST_CASE("symmetry_residual: constant, level-1 closed form, and x^2 M") {
  std::mt19937_64 rng(12);
  const auto [A, B] = random_commuting_pair(rng, 3);
  const Matrix M = random_matrix(rng, 3, 1.0);
  const auto g = MatrixField::exp_seed(A, B);
  CHECK(symmetry_residual(MatrixField::constant(M), g, kGrid).max_abs == 0.0);

  const auto phi1 = MatrixField::tabulate([&](const Point2& p) { return level1(A, B, M, p); }, 3,
                                          kGrid, 7);
  CHECK(symmetry_residual(phi1, g, kGrid).max_abs < 1e-6);

  const auto id = MatrixField::exp_seed(Matrix::Zero(3, 3), Matrix::Zero(3, 3));
  const auto x2M = MatrixField::tabulate([&](const Point2& p) { return Matrix(p[0] * p[0] * M); },
                                         3, kGrid, 7);
  CHECK(symmetry_residual(x2M, id, kGrid).max_abs ==
        doctest::Approx(2.0 * M.cwiseAbs().maxCoeff()).epsilon(1e-5));
}

TEST_CASE("potential: ExpSeed gives X = Bx - At + base") {
  std::mt19937_64 rng(13);
  for (int n : {2, 3}) {
    const auto [A, B] = random_commuting_pair(rng, n);
    const Matrix base = random_matrix(rng, n, 1.0);
    const auto pot = potential(MatrixField::exp_seed(A, B), kGrid);
    CHECK(max_deviation(pot.X, [&](const Point2& p) { return Matrix(B * p[0] - A * p[1]); }) <
          1e-8);
    CHECK(pot.integration.relative() < 1e-10);
    CHECK(potential_residual(pot.X, MatrixField::exp_seed(A, B), kGrid).max_abs < 1e-8);
    // The wrong sign convention fails.
    const auto flipped = MatrixField::tabulate(
        [&](const Point2& p) { return Matrix(A * p[1] - B * p[0]); }, n, kGrid, 5);
    CHECK(potential_residual(flipped, MatrixField::exp_seed(A, B), kGrid).max_abs >
          A.cwiseAbs().maxCoeff());

    const auto shifted = potential(MatrixField::exp_seed(A, B), kGrid, base);
    CHECK((shifted.X(Point2{0, 0}) - base).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("potential: identity gives X = base; anchor is clamped into the box") {
  Matrix base(2, 2);
  base << 1, cd(0, 2), 3, 4;
  const auto pot = potential(MatrixField::constant(Matrix::Identity(2, 2)), kGrid, base);
  CHECK(max_deviation(pot.X, [&](const Point2&) { return base; }) < 1e-13);

  Matrix A(2, 2), B(2, 2);
  A << 0.4, 0, 0, -0.1;
  B << -0.2, 0, 0, 0.7;
  const Grid2D off{0.5, 1.0, 0.2, 0.9, 21, 21, 1e-4};
  const auto shifted = potential(MatrixField::exp_seed(A, B), off);
  const double dev = max_deviation(
      shifted.X, [&](const Point2& p) { return Matrix(B * (p[0] - 0.5) - A * (p[1] - 0.2)); },
      off);
  CHECK(dev < 1e-8);
}

TEST_CASE("potential: non-solution g is rejected as path dependent") {
  Matrix A(2, 2);
  A << 0.5, 0.2, 0.0, -0.3;
  const auto g = MatrixField::tabulate([&](const Point2& p) { return expm(A * p[0] * p[0]); }, 2,
                                       kGrid, 25);
  CHECK_THROWS_AS(potential(g, kGrid), PathDependenceError);
  try {
    potential(g, kGrid);
  } catch (const PathDependenceError& e) {
    // |2 A x t| peaks at the corners.
    CHECK(e.disagreement() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(e.level() == -1);
  }
}

TEST_CASE("recursion_step: Constant(M) gives [X, M]; Constant(0) gives base") {
  std::mt19937_64 rng(14);
  for (int n : {2, 3}) {
    const auto [A, B] = random_commuting_pair(rng, n);
    const Matrix M = random_matrix(rng, n, 1.0);
    const auto g = MatrixField::exp_seed(A, B);
    IntegrationReport report;
    const auto phi1 = recursion_step(MatrixField::constant(M), g, kGrid, Matrix(), {}, &report);
    CHECK(max_deviation(phi1, [&](const Point2& p) { return level1(A, B, M, p); }) < 1e-6);
    CHECK(report.relative() < 1e-6);

    const Matrix base = random_matrix(rng, n, 1.0);
    const auto flat = recursion_step(MatrixField::constant(Matrix::Zero(n, n)), g, kGrid, base);
    CHECK(max_deviation(flat, [&](const Point2&) { return base; }) < 1e-14);
  }
}

TEST_CASE("recursion_step: second application matches the hand-integrated level 2") {
  std::mt19937_64 rng(15);
  for (int n : {2, 3}) {
    const auto [A, B] = random_commuting_pair(rng, n);
    const Matrix M = random_matrix(rng, n, 1.0);
    const auto g = MatrixField::exp_seed(A, B);
    const auto phi1 = recursion_step(MatrixField::constant(M), g, kGrid);
    const auto phi2 = recursion_step(phi1, g, kGrid);
    CHECK(max_deviation(phi2, [&](const Point2& p) { return level2(A, B, M, p); }) < 1e-6);
    CHECK(symmetry_residual(phi2, g, kGrid).max_abs < 1e-5);
  }
}

TEST_CASE("recursion_step: linear in Phi") {
  std::mt19937_64 rng(16);
  const auto [A, B] = random_commuting_pair(rng, 3);
  const auto g = MatrixField::exp_seed(A, B);
  const Matrix M1 = random_matrix(rng, 3, 1.0), M2 = random_matrix(rng, 3, 1.0);
  const auto p1 = recursion_step(MatrixField::constant(M1), g, kGrid);
  const auto p2 = recursion_step(MatrixField::constant(M2), g, kGrid);
  const cd a(0.7, -0.2), b(-1.3, 0.4);
  const auto combo = MatrixField::tabulate(
      [&](const Point2& p) { return Matrix(a * p1(p) + b * p2(p)); }, 3, kGrid, 21);
  const auto lhs = recursion_step(combo, g, kGrid);
  const auto r1 = recursion_step(p1, g, kGrid), r2 = recursion_step(p2, g, kGrid);
  CHECK(max_deviation(lhs, [&](const Point2& p) { return Matrix(a * r1(p) + b * r2(p)); }) < 1e-8);
}

TEST_CASE("recursion_step: Phi violating the symmetry condition is rejected") {
  Matrix M(2, 2);
  M << 0, 1, 1, 0;
  const auto id = MatrixField::constant(Matrix::Identity(2, 2));
  const auto x2M = MatrixField::tabulate([&](const Point2& p) { return Matrix(p[0] * p[0] * M); },
                                         2, kGrid, 7);
  CHECK_THROWS_AS(recursion_step(x2M, id, kGrid), PathDependenceError);
  CHECK_THROWS_AS(recursion_step(MatrixField::constant(Matrix::Zero(3, 3)), id, kGrid),
                  InvalidParameterError);
}

TEST_CASE("hierarchy: levels, residuals, degree growth") {
  Matrix A(2, 2), B(2, 2), M(2, 2);
  A << 1, 0, 0, -1;
  B = 0.5 * A;
  M << 0, 1, 0, 0;
  const auto g = MatrixField::exp_seed(A, B);
  const auto levels = hierarchy(g, M, 3, kGrid);
  REQUIRE(levels.size() == 4);
  for (const auto& c : levels) {
    CHECK(c.symmetry.max_abs < 1e-5);
    CHECK(polynomial_degree(c.phi, kGrid) == c.level);
  }
  CHECK(max_deviation(levels[1].phi, [&](const Point2& p) { return level1(A, B, M, p); }) < 1e-6);
  // Q = g Phi
  const Point2 p{0.3, -0.4};
  CHECK((levels[2].Q(g, p) - g(p) * levels[2].phi(p)).norm() == 0.0);
  CHECK_THROWS_AS(hierarchy(g, M, 0, kGrid), InvalidParameterError);
}

TEST_CASE("hierarchy: M commuting with A and B collapses") {
  std::mt19937_64 rng(17);
  const auto [A, B] = random_commuting_pair(rng, 3);
  const auto levels = hierarchy(MatrixField::exp_seed(A, B), A, 2, kGrid);
  CHECK(max_deviation(levels[1].phi, [](const Point2&) { return Matrix(Matrix::Zero(3, 3)); }) <
        1e-10);
  CHECK(polynomial_degree(levels[2].phi, kGrid, 6, 1e-8) <= 0);
}

TEST_CASE("hierarchy: path failure carries the level") {
  Matrix A(2, 2), M(2, 2);
  A << 0.5, 0.2, 0.0, -0.3;
  M << 0, 1, 1, 0;
  const auto g = MatrixField::tabulate([&](const Point2& p) { return expm(A * p[0] * p[0]); }, 2,
                                       kGrid, 25);
  try {
    hierarchy(g, M, 2, kGrid);
    FAIL("expected PathDependenceError");
  } catch (const PathDependenceError& e) {
    CHECK(e.level() == 1);
  }
}

TEST_CASE("polynomial_degree: known fields") {
  auto scalar = [](std::function<cd(const Point2&)> f) {
    return MatrixField::tabulate(
        [f](const Point2& p) {
          Matrix m(1, 1);
          m(0, 0) = f(p);
          return m;
        },
        1, kGrid, 21);
  };
  CHECK(polynomial_degree(scalar([](const Point2&) { return cd(0, 0); }), kGrid) == 0);
  CHECK(polynomial_degree(scalar([](const Point2&) { return cd(2, 1); }), kGrid) == 0);
  CHECK(polynomial_degree(scalar([](const Point2& p) { return cd(p[0] * p[0] * p[1], 0); }), kGrid) == 3);
  CHECK(polynomial_degree(scalar([](const Point2& p) { return cd(0, p[0] * p[1]); }), kGrid) == 2);
  CHECK(polynomial_degree(scalar([](const Point2& p) { return cd(std::exp(p[0]), 0); }), kGrid, 4) == -1);
}

TEST_CASE("MatrixField::partial: exact derivatives for every family") {
  std::mt19937_64 rng(21);
  const auto [A, B] = random_commuting_pair(rng, 3);
  const auto g = MatrixField::exp_seed(A, B);
  const Point2 p{0.35, -0.6};
  CHECK(max_entry(g.partial(p, 0) - A * g(p)) < 1e-14);
  CHECK(max_entry(g.partial(p, 1) - B * g(p)) < 1e-14);
  CHECK(max_entry(MatrixField::constant(A).partial(p, 1)) == 0.0);

  // Cubic in (x, t): the 21-node interpolant differentiates it to roundoff.
  const Matrix M = random_matrix(rng, 2, 1.0);
  const auto cubic = MatrixField::tabulate(
      [&](const Point2& q) { return Matrix((q[0] * q[0] * q[1] - 2.0 * q[1] * q[1] * q[1]) * M); },
      2, kGrid);
  CHECK(max_entry(cubic.partial(p, 0) - 2.0 * p[0] * p[1] * M) < 1e-12);
  CHECK(max_entry(cubic.partial(p, 1) - (p[0] * p[0] - 6.0 * p[1] * p[1]) * M) < 1e-12);
  const Point2 node{kGrid.x_min, kGrid.t_max};
  CHECK(max_entry(cubic.partial(node, 1) - (1.0 - 6.0) * M) < 1e-11);
  CHECK_THROWS_AS(g.partial(p, 2), InvalidParameterError);
}
