#pragma once

// The source-free Maxwell system as a BT between the two wave equations:
// monochromatic plane waves whose parameters are matched so that (E, B)
// jointly solve Maxwell's equations.

#include "btkit/em.hpp"

namespace btkit::em {

struct VacuumWaveSpec {
  Complex3 E0 = Complex3::Zero();  // V/m
  Real3 tau = Real3::UnitZ();
  double omega = 0.0;  // rad/s
  double alpha = 0.0;  // polarization phase of the real form
};

struct WavePair {
  VacuumWaveSpec spec;
  MediumParams medium;  // sigma == 0
  double k = 0.0;       // omega / v
  Complex3 B0 = Complex3::Zero();
  VectorField E;
  VectorField B;

  EmFields fields() const;
  Real3 wave_vector() const { return k * spec.tau; }
};

/// E = E0 e^{i(k.r - wt)}, B = (1/v)(tau x E0) e^{i(k.r - wt)}, k = (w/v) tau.
/// Rejects non-unit tau, non-transverse E0, omega <= 0, and conducting media.
WavePair conjugate_vacuum(const Complex3& E0, const Real3& tau, double omega,
                          const MediumParams& medium = MediumParams::vacuum());

/// Real linearly polarized form with E0 = E0R e^{i alpha}; E and B in phase.
RealFieldPair real_fields_vacuum(const Real3& E0R, double alpha, const Real3& tau, double omega,
                                 const MediumParams& medium = MediumParams::vacuum());

/// |k x B0 + (w/v^2) E0| / (|E0| w / v^2): the second amplitude relation,
/// which should follow from the first.
double amplitude_redundancy(const WavePair& pair);

/// Independent plane waves E0 e^{i(k.r - wt)} and B0 e^{i(k.r - wt)} with no
/// matching imposed. Used as a wave-equation-only witness.
EmFields unmatched_plane_waves(const Complex3& E0, const Complex3& B0, const Real3& tau, double k,
                               double omega);

}  // namespace btkit::em
