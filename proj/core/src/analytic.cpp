#include "eitsim/analytic.hpp"

#include <cmath>

namespace eitsim {

AnalyticPulse make_analytic(const SystemConfig& cfg) {
  const DerivedRates r = derive_rates(cfg);
  AnalyticPulse p;
  p.amp = cfg.probe_amp;
  p.sigma = cfg.probe_width;
  p.k0z = cfg.k0z;
  p.beta1 = r.beta1;
  p.beta2 = r.beta2;
  p.delay = r.group_delay;
  p.gamma_dec = r.gamma_dec;
  return p;
}

cplx sigma_tilde2(const AnalyticPulse& p, double z) {
  return cplx(p.sigma * p.sigma + 2 * p.k0z * z * p.beta1,
              -2 * p.k0z * z * p.beta2);
}

cplx analytic_envelope(const AnalyticPulse& p, double z, double tau) {
  const cplx s2 = sigma_tilde2(p, z);
  // Re sigma_tilde^2 >= sigma^2 > 0, so the principal sqrt is already the
  // branch continuous from z = 0
  const cplx ratio = p.sigma / std::sqrt(s2);
  const double u = tau - p.delay * z;
  return p.amp * ratio *
         std::exp(-p.gamma_dec * p.delay * z - u * u / (2.0 * s2));
}

double phi_lfc(const AnalyticPulse& p, double z, double tau) {
  const double s2 = p.sigma * p.sigma;
  const double u = tau - p.delay * z;
  return (p.beta2 * p.k0z * z / s2) * (1.0 - u * u / s2);
}

PolarizationComponents polarization_components(const AnalyticPulse& p, double z,
                                               double tau) {
  const cplx s2 = sigma_tilde2(p, z);
  const double u = tau - p.delay * z;
  const cplx env = analytic_envelope(p, z, tau);
  // d/dtau of exp(-u^2/(2 s2)) pulls down -u/s2; second derivative adds
  // (u^2/s2^2 - 1/s2)
  const cplx d1 = -(u / s2) * env;
  const cplx d2 = (u * u / (s2 * s2) - 1.0 / s2) * env;
  PolarizationComponents out;
  out.p0 = cplx(0, 1) * d1;
  out.p_lfc = -d2;
  return out;
}

double phi_nsm(double t, double n2_i0, double k0z, double sigma) {
  return n2_i0 * k0z * std::exp(-t * t / (sigma * sigma));
}

double alpha_nsm(double n2_i0, double k0z, double sigma) {
  return 2 * n2_i0 * k0z / (sigma * sigma);
}

double alpha_lfc(double beta2, double k0z, double sigma) {
  const double s2 = sigma * sigma;
  return 2 * beta2 * k0z / (s2 * s2);
}

}  // namespace eitsim
