#include "btkit/maxwell_conductor.hpp"

#include <algorithm>
#include <cmath>

namespace btkit::em {

DispersionSolution dispersion_solve(const MediumParams& medium, double omega) {
  medium.validate();
  require_frequency(omega);

  const double eps_mu_w2 = medium.epsilon * medium.mu * omega * omega;
  const double ratio = medium.sigma / (medium.epsilon * omega);  // sigma / (eps w)
  DispersionSolution sol;
  sol.omega = omega;
  // hypot keeps sqrt(1 + ratio^2) finite for very good conductors.
  sol.k = std::sqrt(0.5 * eps_mu_w2 * (1.0 + std::hypot(1.0, ratio)));
  sol.s = medium.mu * medium.sigma * omega / (2.0 * sol.k);
  sol.phi = std::atan2(sol.s, sol.k);
  return sol;
}

DispersionResiduals dispersion_residuals(const MediumParams& medium,
                                         const DispersionSolution& sol) {
  const double eps_mu_w2 = medium.epsilon * medium.mu * sol.omega * sol.omega;
  const double k2 = sol.k * sol.k, s2 = sol.s * sol.s;
  const double drive = medium.mu * medium.sigma * sol.omega;
  const double two_sk = 2.0 * sol.s * sol.k;

  DispersionResiduals r;
  r.wavenumber_eq = std::abs(s2 - k2 + eps_mu_w2) / std::max({k2, s2, eps_mu_w2});
  const double scale = std::max(drive, two_sk);
  r.attenuation_eq = scale > 0.0 ? std::abs(drive - two_sk) / scale : 0.0;
  return r;
}

EmFields ConductorWavePair::fields() const {
  return EmFields{E, B, E0.norm(), B0.norm(), std::hypot(dispersion.k, dispersion.s)};
}

ConductorWavePair conjugate_conducting(const Complex3& E0, const Real3& tau,
                                       const MediumParams& medium, double omega, double alpha) {
  medium.validate();
  require_unit(tau);
  require_frequency(omega);
  require_transverse(tau, E0);

  ConductorWavePair pair;
  pair.tau = tau;
  pair.alpha = alpha;
  pair.medium = medium;
  pair.dispersion = dispersion_solve(medium, omega);
  pair.E0 = E0 * std::polar(1.0, alpha);
  const std::complex<double> k_complex(pair.dispersion.k, pair.dispersion.s);
  pair.B0 = (k_complex / omega) * cross(tau, pair.E0);
  pair.E = plane_wave(pair.E0, tau, pair.dispersion.k, omega, pair.dispersion.s);
  pair.B = plane_wave(pair.B0, tau, pair.dispersion.k, omega, pair.dispersion.s);
  return pair;
}

double ampere_amplitude_residual(const ConductorWavePair& pair) {
  const auto& d = pair.dispersion;
  const std::complex<double> k_complex(d.k, d.s);
  const std::complex<double> drive(pair.medium.epsilon * pair.medium.mu * d.omega,
                                   pair.medium.mu * pair.medium.sigma);
  const Complex3 rhs = drive * pair.E0;
  const Complex3 lhs = k_complex * cross(pair.tau, pair.B0);
  const double scale = rhs.norm();
  return scale > 0.0 ? (lhs + rhs).norm() / scale : (lhs + rhs).norm();
}

RealFieldPair real_fields_conducting(const Real3& E0R, double alpha, const Real3& tau,
                                     const MediumParams& medium, double omega) {
  const ConductorWavePair complex =
      conjugate_conducting(E0R.cast<std::complex<double>>(), tau, medium, omega, alpha);
  const auto& d = complex.dispersion;
  return make_real_pair(E0R, tau, d.k, d.s, omega, alpha, alpha + d.phi,
                        std::hypot(d.k, d.s) / omega);
}

Grid4D default_grid(const DispersionSolution& sol, const Real3& tau, int samples, double step) {
  return default_grid(sol.k, sol.omega, samples, step, std::hypot(sol.k, sol.s), tau);
}

}  // namespace btkit::em
