#include "btkit/em.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace btkit::em {

PhysicalConstants PhysicalConstants::codata2018() {
  PhysicalConstants k;
  k.c = 1.0 / std::sqrt(k.epsilon0 * k.mu0);
  return k;
}

const PhysicalConstants& constants() {
  static const PhysicalConstants k = PhysicalConstants::codata2018();
  return k;
}

MediumParams MediumParams::vacuum() { return {constants().epsilon0, constants().mu0, 0.0}; }

MediumParams MediumParams::relative(double epsilon_rel, double mu_rel, double sigma) {
  return {epsilon_rel * constants().epsilon0, mu_rel * constants().mu0, sigma};
}

void MediumParams::validate() const {
  std::ostringstream msg;
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    msg << "medium: epsilon must be positive, got " << epsilon;
  } else if (!(mu > 0.0) || !std::isfinite(mu)) {
    msg << "medium: mu must be positive, got " << mu;
  } else if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    msg << "medium: sigma must be non-negative, got " << sigma;
  } else {
    return;
  }
  throw InvalidParameterError(msg.str());
}

double MediumParams::wave_speed() const { return 1.0 / std::sqrt(epsilon * mu); }

std::complex<double> dot(const Complex3& a, const Complex3& b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

Complex3 cross(const Real3& tau, const Complex3& v) {
  return Complex3(tau(1) * v(2) - tau(2) * v(1), tau(2) * v(0) - tau(0) * v(2),
                  tau(0) * v(1) - tau(1) * v(0));
}

double norm(const Complex3& v) { return v.norm(); }

void require_unit(const Real3& tau) {
  const double n = tau.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "propagation direction tau must be a unit vector, |tau| = " << n;
    throw NonUnitDirectionError(msg.str());
  }
}

void require_transverse(const Real3& tau, const Complex3& E0) {
  const double d = std::abs(dot(tau.cast<std::complex<double>>(), E0));
  if (d > 1e-12 * E0.norm() || !std::isfinite(d)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "non-transverse amplitude: tau·E0 ≠ 0 (|tau·E0| = " << d << ", |E0| = " << E0.norm()
        << ")";
    throw NonTransverseError(msg.str(), d);
  }
}

void require_frequency(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    std::ostringstream msg;
    msg << "angular frequency omega must be positive, got " << omega;
    throw InvalidParameterError(msg.str());
  }
}

VectorField plane_wave(const Complex3& amplitude, const Real3& tau, double wavenumber,
                       double omega, double attenuation) {
  return [=](const Point4& p) {
    const double along = tau(0) * p[0] + tau(1) * p[1] + tau(2) * p[2];
    const std::complex<double> phase(-attenuation * along, wavenumber * along - omega * p[3]);
    return Complex3(amplitude * std::exp(phase));
  };
}

EmFields RealFieldPair::fields() const {
  const double b_amp = b_factor * E0R.norm();
  return EmFields{E, B, E0R.norm(), b_amp, std::hypot(k, s)};
}

RealFieldPair make_real_pair(const Real3& E0R, const Real3& tau, double k, double s, double omega,
                             double e_phase, double b_phase, double b_factor) {
  RealFieldPair p;
  p.E0R = E0R;
  p.tau = tau;
  p.k = k;
  p.s = s;
  p.omega = omega;
  p.e_phase = e_phase;
  p.b_phase = b_phase;
  p.b_factor = b_factor;
  const Real3 Bdir = b_factor * tau.cross(E0R);
  p.E = [=](const Point4& q) {
    const double along = tau(0) * q[0] + tau(1) * q[1] + tau(2) * q[2];
    const double env = std::exp(-s * along) * std::cos(k * along - omega * q[3] + e_phase);
    return Complex3((E0R * env).cast<std::complex<double>>());
  };
  p.B = [=](const Point4& q) {
    const double along = tau(0) * q[0] + tau(1) * q[1] + tau(2) * q[2];
    const double env = std::exp(-s * along) * std::cos(k * along - omega * q[3] + b_phase);
    return Complex3((Bdir * env).cast<std::complex<double>>());
  };
  return p;
}

Grid4D default_grid(double k, double omega, int samples, double step, double kappa,
                    const Real3& tau) {
  if (!(k > 0.0) || !(omega > 0.0)) {
    throw InvalidParameterError("default_grid: wavenumber and frequency must be positive");
  }
  if (kappa <= 0.0) kappa = k;
  const double wavelength = 2.0 * std::numbers::pi / k;
  const double period = 2.0 * std::numbers::pi / omega;
  Grid4D g;
  for (int a = 0; a < 3; ++a) {
    g.lo[a] = tau(a) < 0.0 ? -wavelength : 0.0;
    g.hi[a] = tau(a) < 0.0 ? 0.0 : wavelength;
  }
  g.lo[3] = 0.0;
  g.hi[3] = period;
  g.n = {samples, samples, samples, samples};
  g.h = {step / kappa, step / kappa, step / kappa, step / omega};
  return g;
}

ResidualReport maxwell_residual(const EmFields& pair, const Grid4D& grid,
                                const MediumParams& medium) {
  medium.validate();
  const double v = medium.wave_speed();
  double n_e = pair.wavenumber * std::max(pair.e_amplitude, v * pair.b_amplitude);
  if (!(n_e > 0.0)) n_e = 1.0;
  const double n_b = n_e / v;
  const double eps_mu = medium.epsilon * medium.mu;
  const double mu_sigma = medium.mu * medium.sigma;

  return residual_scan(
      [&](const Point4& p) {
        const VectorOps e = vector_ops(pair.E, p, grid.h);
        const VectorOps b = vector_ops(pair.B, p, grid.h);
        const Complex3 E = pair.E(p);
        const double gauss_e = max_part(e.divergence) / n_e;
        const double gauss_b = max_part(b.divergence) / n_b;
        const double faraday = max_part(Complex3(e.curl + b.dt)) / n_e;
        const double ampere = max_part(Complex3(b.curl - eps_mu * e.dt - mu_sigma * E)) / n_b;
        return std::max({gauss_e, gauss_b, faraday, ampere});
      },
      grid);
}

ResidualReport modified_wave_residual(const VectorField& F, const MediumParams& medium,
                                      const Grid4D& grid, double norm) {
  medium.validate();
  if (!(norm > 0.0)) norm = 1.0;
  const double eps_mu = medium.epsilon * medium.mu;
  const double mu_sigma = medium.mu * medium.sigma;
  return residual_scan(
      [&](const Point4& p) {
        const VectorOps o = vector_ops(F, p, grid.h);
        return max_part(Complex3(o.laplacian - eps_mu * o.dtt - mu_sigma * o.dt)) / norm;
      },
      grid);
}

ResidualReport wave_residual(const VectorField& F, double speed, const Grid4D& grid,
                             double norm) {
  if (!(speed > 0.0) || !std::isfinite(speed)) {
    throw InvalidParameterError("wave_residual: speed must be positive");
  }
  if (!(norm > 0.0)) norm = 1.0;
  const double inv_c2 = 1.0 / (speed * speed);
  return residual_scan(
      [&](const Point4& p) {
        const VectorOps o = vector_ops(F, p, grid.h);
        return max_part(Complex3(o.laplacian - inv_c2 * o.dtt)) / norm;
      },
      grid);
}

}  // namespace btkit::em
