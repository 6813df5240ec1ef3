#include <doctest.h>

#include <cmath>
#include <numbers>

#include "btkit/maxwell_vacuum.hpp"
#include "em_test_support.hpp"

using namespace btkit;
using namespace btkit::em;
using btkit::testing::random_transverse;
using btkit::testing::random_transverse_real;
using btkit::testing::random_unit;

namespace {

using cd = std::complex<double>;
const double c = constants().c;

}  // namespace

TEST_CASE("constants: c from eps0 and mu0") {
  const auto& k = constants();
  CHECK(std::abs(k.c * std::sqrt(k.epsilon0 * k.mu0) - 1.0) < 1e-12);
  CHECK(std::abs(k.c / 299792458.0 - 1.0) < 1e-9);
}

TEST_CASE("conjugate_vacuum: x-polarized wave along z") {
  const auto pair = conjugate_vacuum(Complex3(1, 0, 0), Real3::UnitZ(), 1e9);
  CHECK(pair.k == doctest::Approx(1e9 / c).epsilon(1e-15));
  CHECK(std::abs(pair.B0(0)) == 0.0);
  CHECK(pair.B0(1).real() == doctest::Approx(1.0 / c).epsilon(1e-15));
  CHECK(std::abs(pair.B0(2)) == 0.0);
  // k x E0 = omega B0
  const Complex3 kxE = pair.k * cross(pair.spec.tau, pair.spec.E0);
  CHECK((kxE - pair.spec.omega * pair.B0).norm() <= 1e-15 * kxE.norm());
}

TEST_CASE("conjugate_vacuum: longitudinal amplitude is rejected, not projected") {
  CHECK_THROWS_AS(conjugate_vacuum(Complex3(0, 0, 1), Real3::UnitZ(), 1e9), NonTransverseError);
  try {
    conjugate_vacuum(Complex3(0.5, 0, 1), Real3::UnitZ(), 1e9);
    FAIL("expected rejection");
  } catch (const NonTransverseError& e) {
    CHECK(std::string(e.what()).find("tau·E0") != std::string::npos);
    CHECK(e.dot_magnitude() == doctest::Approx(1.0));
  }
}

TEST_CASE("conjugate_vacuum: other preconditions") {
  CHECK_THROWS_AS(conjugate_vacuum(Complex3(1, 0, 0), Real3(0, 0, 2), 1e9), NonUnitDirectionError);
  CHECK_THROWS_AS(conjugate_vacuum(Complex3(1, 0, 0), Real3::UnitZ(), 0.0), InvalidParameterError);
  CHECK_THROWS_AS(conjugate_vacuum(Complex3(1, 0, 0), Real3::UnitZ(), -5.0), InvalidParameterError);
  auto lossy = MediumParams::vacuum();
  lossy.sigma = 1.0;
  CHECK_THROWS_AS(conjugate_vacuum(Complex3(1, 0, 0), Real3::UnitZ(), 1e9, lossy),
                  InvalidParameterError);
}

TEST_CASE("conjugate_vacuum: circular amplitude passes Maxwell on a 5^4 grid") {
  const Complex3 E0 = Complex3(cd(1, 0), cd(0, 1), 0) / std::sqrt(2.0);
  const double omega = 2 * std::numbers::pi * 1e8;
  const auto pair = conjugate_vacuum(E0, Real3::UnitZ(), omega);
  const auto grid = default_grid(pair.k, omega, 5);
  const auto r = maxwell_residual(pair.fields(), grid, MediumParams::vacuum());
  CHECK(r.max_abs < 1e-6);
  CHECK(r.n_points == 625);
}

TEST_CASE("conjugate_vacuum: B = (1/c) tau x E pointwise") {
  std::mt19937_64 rng(21);
  const Real3 tau = random_unit(rng);
  const auto pair = conjugate_vacuum(random_transverse(rng, tau), tau, 3e9);
  for (const Point4& p : {Point4{0, 0, 0, 0}, Point4{0.01, -0.02, 0.05, 1e-10}}) {
    const Complex3 expected = cross(tau, pair.E(p)) / c;
    CHECK((pair.B(p) - expected).norm() <= 1e-14 * expected.norm());
  }
}

TEST_CASE("real_fields_vacuum: values and phases") {
  const double omega = 1e9;
  auto r = real_fields_vacuum(Real3(1, 0, 0), 0.0, Real3::UnitZ(), omega);
  const Point4 origin{0, 0, 0, 0};
  CHECK(r.E(origin)(0).real() == 1.0);
  CHECK(r.B(origin)(1).real() == doctest::Approx(1.0 / c).epsilon(1e-15));
  CHECK(r.phase_lag() == 0.0);

  r = real_fields_vacuum(Real3(1, 0, 0), std::numbers::pi / 2, Real3::UnitZ(), omega);
  CHECK(std::abs(r.E(origin)(0)) < 1e-15);
  CHECK(std::abs(r.B(origin)(1)) < 1e-15 / c);
}

TEST_CASE("real_fields_vacuum: E and B oscillate in phase everywhere") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Real3 tau = random_unit(rng);
    const Real3 E0R = random_transverse_real(rng, tau);
    const double alpha = 3 * U(rng);
    const auto r = real_fields_vacuum(E0R, alpha, tau, 2e9);
    CHECK(r.e_phase == r.b_phase);
    for (int i = 0; i < 10; ++i) {
      const Point4 p{U(rng), U(rng), U(rng), 1e-9 * U(rng)};
      const Complex3 expected = cross(tau, r.E(p)) / c;
      CHECK((r.B(p) - expected).norm() <= 1e-14 * E0R.norm() / c);
    }
    const auto grid = default_grid(r.k, r.omega, 5);
    CHECK(maxwell_residual(r.fields(), grid, MediumParams::vacuum()).max_abs < 1e-6);
  }
}

TEST_CASE("maxwell_residual: negative and trivial controls") {
  const double omega = 1e9, k = omega / c;
  const auto grid = default_grid(k, omega, 5);

  const auto only_e = unmatched_plane_waves(Complex3(1, 0, 0), Complex3::Zero(), Real3::UnitZ(), k, omega);
  const auto r = maxwell_residual(only_e, grid, MediumParams::vacuum());
  // Faraday residual |k x E0| normalized by k|E0|.
  CHECK(r.max_abs == doctest::Approx(1.0).epsilon(1e-3));

  const auto zero = unmatched_plane_waves(Complex3::Zero(), Complex3::Zero(), Real3::UnitZ(), k, omega);
  CHECK(maxwell_residual(zero, grid, MediumParams::vacuum()).max_abs == 0.0);
}

TEST_CASE("wave_residual: dispersion match and mismatch") {
  const double omega = 1e9, k = omega / c;
  const auto grid = default_grid(k, omega, 5);
  const Complex3 E0(0.3, cd(0, -1), 0);
  const double norm = E0.norm() * k * k;

  CHECK(wave_residual(plane_wave(E0, Real3::UnitZ(), k, omega), c, grid, norm).max_abs < 1e-6);
  // omega / k = 2c checked at speed c: |-k^2 + 4k^2| / k^2 = 3.
  const auto off = wave_residual(plane_wave(E0, Real3::UnitZ(), k, 2 * omega), c, grid, norm);
  // Five samples per axis need not hit the crest of either part.
  CHECK(off.max_abs > 2.5);
  CHECK(off.max_abs <= 3.0 + 1e-6);
  CHECK(wave_residual([](const Point4&) { return Complex3(Complex3::Zero()); }, c, grid).max_abs == 0.0);
}

TEST_CASE("conjugate pairs: amplitude redundancy, orthogonality, magnitudes") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const Real3 tau = random_unit(rng);
    const Complex3 E0 = random_transverse(rng, tau, 10.0);
    const auto pair = conjugate_vacuum(E0, tau, 1e8 * (1 + trial));
    CHECK(amplitude_redundancy(pair) < 1e-12);
    const Complex3 t = tau.cast<cd>();
    CHECK(std::abs(dot(E0, pair.B0)) <= 1e-12 * E0.norm() * pair.B0.norm());
    CHECK(std::abs(dot(t, E0)) <= 1e-12 * E0.norm());
    CHECK(std::abs(dot(t, pair.B0)) <= 1e-12 * pair.B0.norm());
  }
  // Linear polarization: |B0| = |E0| / c.
  const Real3 tau = random_unit(rng);
  const Real3 E0R = random_transverse_real(rng, tau);
  const auto lin = conjugate_vacuum(E0R.cast<cd>() * std::polar(1.0, 0.7), tau, 5e8);
  CHECK(lin.B0.norm() == doctest::Approx(E0R.norm() / c).epsilon(1e-13));
}

TEST_CASE("wave equations hold for unmatched pairs while Maxwell fails") {
  std::mt19937_64 rng(17);
  const double omega = 7e8, k = omega / c;
  const Real3 tau = random_unit(rng);
  const Complex3 E0 = random_transverse(rng, tau);
  const Complex3 B0 = random_transverse(rng, tau) / c;
  const auto pair = unmatched_plane_waves(E0, B0, tau, k, omega);
  const auto grid = default_grid(k, omega, 5);
  CHECK(wave_residual(pair.E, c, grid, E0.norm() * k * k).max_abs < 1e-6);
  CHECK(wave_residual(pair.B, c, grid, B0.norm() * k * k).max_abs < 1e-6);
  CHECK(maxwell_residual(pair, grid, MediumParams::vacuum()).max_abs > 0.1);
}

TEST_CASE("non-conducting medium replaces eps0 and mu0") {
  const auto glass = MediumParams::relative(2.25, 1.0);
  const double omega = 3e9;
  const auto pair = conjugate_vacuum(Complex3(0, 1, 0), Real3::UnitX(), omega, glass);
  CHECK(pair.k == doctest::Approx(omega * std::sqrt(glass.epsilon * glass.mu)).epsilon(1e-14));
  CHECK(omega / pair.k == doctest::Approx(c / 1.5).epsilon(1e-12));
  const auto grid = default_grid(pair.k, omega, 5);
  CHECK(maxwell_residual(pair.fields(), grid, glass).max_abs < 1e-6);
  CHECK(maxwell_residual(pair.fields(), grid, MediumParams::vacuum()).max_abs > 0.1);
}
