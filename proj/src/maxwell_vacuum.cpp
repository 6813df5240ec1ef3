#include "btkit/maxwell_vacuum.hpp"

#include <cmath>

namespace btkit::em {

EmFields WavePair::fields() const { return EmFields{E, B, spec.E0.norm(), B0.norm(), k}; }

WavePair conjugate_vacuum(const Complex3& E0, const Real3& tau, double omega,
                          const MediumParams& medium) {
  medium.validate();
  if (medium.sigma != 0.0) {
    throw InvalidParameterError("conjugate_vacuum: medium must be non-conducting (sigma = 0)");
  }
  require_unit(tau);
  require_frequency(omega);
  require_transverse(tau, E0);

  WavePair pair;
  pair.spec = VacuumWaveSpec{E0, tau, omega, 0.0};
  pair.medium = medium;
  const double v = medium.wave_speed();
  pair.k = omega / v;
  pair.B0 = cross(tau, E0) / v;
  pair.E = plane_wave(E0, tau, pair.k, omega);
  pair.B = plane_wave(pair.B0, tau, pair.k, omega);
  return pair;
}

RealFieldPair real_fields_vacuum(const Real3& E0R, double alpha, const Real3& tau, double omega,
                                 const MediumParams& medium) {
  // Validation is shared with the complex construction.
  const WavePair complex = conjugate_vacuum(E0R.cast<std::complex<double>>(), tau, omega, medium);
  const double v = medium.wave_speed();
  return make_real_pair(E0R, tau, complex.k, 0.0, omega, alpha, alpha, 1.0 / v);
}

double amplitude_redundancy(const WavePair& pair) {
  const double v = pair.medium.wave_speed();
  const double w_over_v2 = pair.spec.omega / (v * v);
  const Complex3 lhs = pair.k * cross(pair.spec.tau, pair.B0) + w_over_v2 * pair.spec.E0;
  const double scale = pair.spec.E0.norm() * w_over_v2;
  return scale > 0.0 ? lhs.norm() / scale : lhs.norm();
}

EmFields unmatched_plane_waves(const Complex3& E0, const Complex3& B0, const Real3& tau, double k,
                               double omega) {
  return EmFields{plane_wave(E0, tau, k, omega), plane_wave(B0, tau, k, omega), E0.norm(),
                  B0.norm(), k};
}

}  // namespace btkit::em
