#pragma once

#include "eitsim/config.hpp"
#include "eitsim/types.hpp"

namespace eitsim {

// Closed-form propagated Gaussian: the quadratic-dispersion solution evaluated
// at depth fraction z in [0,1] of the configured medium.
struct AnalyticPulse {
  double amp = 0;          // input peak
  double sigma = 0;        // input width
  double k0z = 0;          // full-depth k0*z_total
  double beta1 = 0, beta2 = 0;
  double delay = 0;        // full-depth group delay
  double gamma_dec = 0;
};

AnalyticPulse make_analytic(const SystemConfig& cfg);

// sigma_tilde^2(z) = sigma^2 + 2*k0z*z*(beta1 - i*beta2)
cplx sigma_tilde2(const AnalyticPulse& p, double z);

// amp * (sigma/sigma_tilde) * exp[-gamma_dec*delay*z - u^2/(2 sigma_tilde^2)],
// u = tau - delay*z; sqrt branch continuous from z = 0.
cplx analytic_envelope(const AnalyticPulse& p, double z, double tau);

// The leading-order phase parabola (beta2*k0z*z/sigma^2)*(1 - u^2/sigma^2).
// Leading order only: it overshoots the exact arg(envelope) once
// 2*k0z*z*beta1/sigma^2 stops being small.
double phi_lfc(const AnalyticPulse& p, double z, double tau);

// Envelope-frame polarization pieces driving the field equation: the
// dispersive background proportional to i d/dtau of the envelope and the
// local-field piece proportional to -d^2/dtau^2, both from the closed-form
// derivatives (no finite differences). Common prefactors are normalized away;
// only phases and shapes are meaningful downstream.
struct PolarizationComponents {
  cplx p0;
  cplx p_lfc;
};

PolarizationComponents polarization_components(const AnalyticPulse& p, double z,
                                               double tau);

// Kerr self-modulation comparator: phi = n2*I(t)*k0z with Gaussian intensity
// I(t) = I0 * exp(-t^2/sigma^2).
double phi_nsm(double t, double n2_i0, double k0z, double sigma);
double alpha_nsm(double n2_i0, double k0z, double sigma);  // 2 n2 I0 k0z / sigma^2
double alpha_lfc(double beta2, double k0z, double sigma);  // 2 beta2 k0z / sigma^4

}  // namespace eitsim
