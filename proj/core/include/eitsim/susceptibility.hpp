#pragma once

#include <vector>

#include "eitsim/config.hpp"
#include "eitsim/types.hpp"

namespace eitsim {

// Weak-probe susceptibility of the driven three-level medium at probe detuning
// delta31 (overrides the config's own delta31; everything else, including
// delta32, comes from cfg). include_lfc_shift = false replaces the shifted
// detuning delta31 + L*gamma31/2 by the bare one, which restores the
// odd/even symmetry of the dilute curve; the physical response keeps it on.
// Throws solver_error when the evaluation point sits on the pole.
cplx chi(const SystemConfig& cfg, double delta31, bool include_lfc_shift = true);

// Total complex phase k(omega) * z_total across the medium, full square-root
// form (omega/c) sqrt(1+chi) scaled to dimensionless k0z units. Throws
// solver_error if 1+chi lands on the branch cut.
cplx wave_number(const SystemConfig& cfg, double delta31);

// Everything is a total-depth coefficient: the complex phase near line center
// is kz ~ k0z + i*absorption_offset + group_delay*d + (b2 + i*b1)*d^2.
struct DispersionCoefficients {
  // closed forms
  double absorption_offset = 0;  // group_delay * gamma_dec
  double group_delay = 0;        // 3 L gamma31 k0z / omega32^2
  double b1 = 0;                 // k0z * beta1
  double b2 = 0;                 // k0z * beta2
  double n_g = 0;
  // finite differences of the envelope phase k0z*(1 + chi/2) the marching
  // solver embodies, Richardson-refined once
  double fd_delay = 0;
  cplx fd_quadratic{};           // expect b2 + i*b1
  // same finite differences applied to the full sqrt form; its real quadratic
  // part is NOT b2: the sqrt's second-order term -chi^2/8 cancels 3/4 of it
  // at EIT parameters (chi1^2/8 = 0.75*beta2 identically when gamma_dec ~ 0)
  cplx fd_quadratic_sqrt{};
  std::vector<std::string> warnings;
};

DispersionCoefficients dispersion_expansion(const SystemConfig& cfg);

// chi recomputed from the steady state of the equations of motion
// (linearized or full per cfg.use_linearized_eom) through the identity
// chi = 3 L gamma31 rho31 / omega31. Needs probe_amp <= 1e-3 * omega32.
cplx steady_state_chi_oracle(const SystemConfig& cfg, double delta31);

}  // namespace eitsim
