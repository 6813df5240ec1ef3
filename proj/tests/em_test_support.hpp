#pragma once

#include <complex>
#include <random>

#include "btkit/verify.hpp"

namespace btkit::testing {

inline Real3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Real3 v;
  do {
    v = Real3(N(rng), N(rng), N(rng));
  } while (v.norm() < 1e-3);
  return v / v.norm();
}

/// Random complex amplitude orthogonal to tau. Projection happens here in
/// the generator, never in the library.
inline Complex3 random_transverse(std::mt19937_64& rng, const Real3& tau, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, scale);
  Complex3 e;
  for (int c = 0; c < 3; ++c) e(c) = std::complex<double>(N(rng), N(rng));
  const Complex3 t = tau.cast<std::complex<double>>();
  const std::complex<double> along = t(0) * e(0) + t(1) * e(1) + t(2) * e(2);
  return e - along * t;
}

inline Real3 random_transverse_real(std::mt19937_64& rng, const Real3& tau) {
  std::normal_distribution<double> N(0.0, 1.0);
  Real3 e(N(rng), N(rng), N(rng));
  return e - e.dot(tau) * tau;
}

}  // namespace btkit::testing
