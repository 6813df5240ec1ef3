#pragma once

// Shared electromagnetic vocabulary for the vacuum and conducting-medium
// plane-wave modules: media, constants, field pairs, grids.

#include <complex>

#include "btkit/verify.hpp"

namespace btkit::em {

/// CODATA 2018 vacuum constants; c is derived as 1/sqrt(eps0 mu0).
struct PhysicalConstants {
  double epsilon0 = 8.8541878128e-12;  // F/m
  double mu0 = 1.25663706212e-6;       // H/m
  double c = 0.0;                      // m/s

  static PhysicalConstants codata2018();
};

const PhysicalConstants& constants();

/// Linear, isotropic medium with absolute permittivity and permeability.
struct MediumParams {
  double epsilon = 0.0;  // F/m
  double mu = 0.0;       // H/m
  double sigma = 0.0;    // S/m

  static MediumParams vacuum();
  /// epsilon_rel * eps0, mu_rel * mu0.
  static MediumParams relative(double epsilon_rel, double mu_rel, double sigma = 0.0);

  /// Throws InvalidParameterError unless epsilon > 0, mu > 0, sigma >= 0.
  void validate() const;
  /// 1 / sqrt(epsilon mu)
  double wave_speed() const;
};

/// Transpose (bilinear) dot product, no conjugation.
std::complex<double> dot(const Complex3& a, const Complex3& b);
Complex3 cross(const Real3& tau, const Complex3& v);
double norm(const Complex3& v);

/// | |tau| - 1 | <= 1e-12, else NonUnitDirectionError.
void require_unit(const Real3& tau);
/// |tau . E0| <= 1e-12 |E0|, else NonTransverseError naming the dot product.
void require_transverse(const Real3& tau, const Complex3& E0);
/// omega finite and > 0, else InvalidParameterError.
void require_frequency(double omega);

/// E0 exp(i (k.r - omega t)) with k = wavenumber * tau; optional attenuation
/// exp(-s tau.r).
VectorField plane_wave(const Complex3& amplitude, const Real3& tau, double wavenumber,
                       double omega, double attenuation = 0.0);

/// Any (E, B) pair plus the scales used to normalize Maxwell residuals.
struct EmFields {
  VectorField E;
  VectorField B;
  double e_amplitude = 0.0;  // |E0|
  double b_amplitude = 0.0;  // |B0|
  double wavenumber = 0.0;   // |k + i s|
};

/// Real linearly polarized fields:
///   E = E0R e^{-s tau.r} cos(k tau.r - omega t + e_phase)
///   B = b_factor (tau x E0R) e^{-s tau.r} cos(k tau.r - omega t + b_phase)
struct RealFieldPair {
  Real3 E0R;
  Real3 tau;
  double k = 0.0;
  double s = 0.0;
  double omega = 0.0;
  double e_phase = 0.0;
  double b_phase = 0.0;
  double b_factor = 0.0;
  VectorField E;
  VectorField B;

  EmFields fields() const;
  double phase_lag() const { return b_phase - e_phase; }
};

RealFieldPair make_real_pair(const Real3& E0R, const Real3& tau, double k, double s, double omega,
                             double e_phase, double b_phase, double b_factor);

/// One wavelength per spatial axis and one period in time, `samples` points
/// per axis, steps step/kappa in space and step/omega in time. Each spatial
/// axis spans [0, lambda] or [-lambda, 0] so that tau.r >= 0 on the grid:
/// attenuated waves are sampled downstream of the origin, where they decay.
Grid4D default_grid(double k, double omega, int samples = 9, double step = kDefaultStep,
                    double kappa = 0.0, const Real3& tau = Real3::Ones());

/// Pointwise max of the four Maxwell residuals
///   |div E|, |div B|, |curl E + B_t|, |curl B - eps mu E_t - mu sigma E|
/// normalized by n_E = kappa max(|E0|, v|B0|) for E-type equations and
/// n_E / v for B-type equations (v = 1/sqrt(eps mu)).
ResidualReport maxwell_residual(const EmFields& pair, const Grid4D& grid,
                                const MediumParams& medium);

/// |lap F - eps mu F_tt - mu sigma F_t| / norm.
ResidualReport modified_wave_residual(const VectorField& F, const MediumParams& medium,
                                      const Grid4D& grid, double norm = 1.0);

/// |lap F - F_tt / speed^2| / norm.
ResidualReport wave_residual(const VectorField& F, double speed, const Grid4D& grid,
                             double norm = 1.0);

}  // namespace btkit::em
