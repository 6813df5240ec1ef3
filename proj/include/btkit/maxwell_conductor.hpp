#pragma once

// Attenuated plane waves in a linear conducting medium: the dispersion
// system linking (k, s, omega), the matched (E, B) pair, and the real
// linearly polarized fields with the magnetic phase lag.

#include <optional>

#include "btkit/em.hpp"

namespace btkit::em {

struct DispersionSolution {
  double k = 0.0;      // rad/m
  double s = 0.0;      // 1/m, attenuation constant
  double phi = 0.0;    // rad, phase lag, tan phi = s / k
  double omega = 0.0;  // rad/s

  /// omega / k
  double speed() const { return omega / k; }
  /// 1/s, or nullopt in a non-conducting medium.
  std::optional<double> skin_depth() const {
    return s > 0.0 ? std::optional<double>(1.0 / s) : std::nullopt;
  }
};

/// Relative residuals of  s^2 - k^2 + eps mu w^2 = 0  and  mu sigma w - 2 s k = 0.
struct DispersionResiduals {
  double wavenumber_eq = 0.0;
  double attenuation_eq = 0.0;
};

/// Closed form on the k > 0, s >= 0 branch:
///   k^2 = (eps mu w^2 / 2)(1 + sqrt(1 + (sigma/(eps w))^2)),  s = mu sigma w / (2k).
DispersionSolution dispersion_solve(const MediumParams& medium, double omega);

DispersionResiduals dispersion_residuals(const MediumParams& medium,
                                         const DispersionSolution& sol);

struct ConductorWavePair {
  Complex3 E0 = Complex3::Zero();  // includes the e^{i alpha} factor
  Complex3 B0 = Complex3::Zero();
  Real3 tau = Real3::UnitZ();
  double alpha = 0.0;
  MediumParams medium;
  DispersionSolution dispersion;
  VectorField E;
  VectorField B;

  EmFields fields() const;
};

/// E = E0 e^{i alpha} e^{-s tau.r} e^{i(k.r - wt)}, B0 = ((k + i s)/w)(tau x E0 e^{i alpha}).
ConductorWavePair conjugate_conducting(const Complex3& E0, const Real3& tau,
                                       const MediumParams& medium, double omega,
                                       double alpha = 0.0);

/// |(k + is) tau x B0 + (eps mu w + i mu sigma) E0| relative to |(eps mu w + i mu sigma) E0|.
double ampere_amplitude_residual(const ConductorWavePair& pair);

/// E = E0R e^{-s tau.r} cos(k tau.r - wt + alpha)
/// B = (sqrt(k^2+s^2)/w)(tau x E0R) e^{-s tau.r} cos(k tau.r - wt + alpha + phi)
RealFieldPair real_fields_conducting(const Real3& E0R, double alpha, const Real3& tau,
                                     const MediumParams& medium, double omega);

/// Default scan grid for a conducting medium: one wavelength, one period,
/// downstream of the origin along tau.
Grid4D default_grid(const DispersionSolution& sol, const Real3& tau, int samples = 9,
                    double step = kDefaultStep);

}  // namespace btkit::em
