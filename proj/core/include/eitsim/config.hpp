#pragma once

#include <string>
#include <vector>

#include "eitsim/types.hpp"

namespace eitsim {

struct GridConfig {
  int n_z = 400;                // z samples across the medium, including both faces
  int n_tau = 1601;             // retarded-time samples, inclusive endpoints
  double tau_half_width = 160;  // window is [-W, +W] in units of 1/gamma31
};

enum class InitialState { ground1, mixed12 };

// All rates and detunings in units of gamma31, times in 1/gamma31.
// Lambda scheme: |1>,|2> ground, |3> excited; probe couples 1-3, control 2-3.
struct SystemConfig {
  double gamma31 = 1.0;
  double gamma32 = 1.0;
  double gamma_s = 0.0;      // incoherent 1<->2 exchange (both directions)
  double gamma_deph = 0.0;   // pure dephasing of the Raman coherence rho21
  double delta31 = 0.0;
  double delta32 = 0.0;
  double omega32 = 4.0;      // control Rabi frequency (real input envelope)
  double probe_amp = 1e-3;   // Gaussian probe peak Rabi frequency
  double probe_width = 10.0; // Gaussian sigma in 1/gamma31
  double n_lambda3 = 50.0;   // density N lambda^3; local-field strength L = N lambda^3 / 4 pi^2
  double trap_ratio = 0.99;  // r_a/r_e, fraction of spontaneous photons reabsorbed
  double k0z = 316.0;        // optical depth k0 * z_total, dimensionless
  double omega0_over_gamma = 6.6e7;  // carrier frequency over gamma31; only n_g scales with it

  bool lfc_on = true;          // Lorentz-Lorenz local field
  bool lfc_control_on = true;  // apply the local-field term to the control too
  bool trapping_on = true;     // radiation-trapping pump terms
  bool propagate_control = false;  // march the control field as well as the probe
  bool use_linearized_eom = false; // weak-probe two-coherence equations instead of full rho

  InitialState initial_state = InitialState::ground1;
  GridConfig grid;
  int store_every = 0;  // keep every k-th z slab in the output record; 0 = faces only
};

struct Diagnostic {
  std::string field;
  std::string message;
};

// Returns every violated constraint; empty means usable.
std::vector<Diagnostic> validate_config(const SystemConfig& cfg);

// Throws config_error listing all diagnostics.
void require_valid(const SystemConfig& cfg);

// Quantities derived from the config, gamma31 units throughout.
struct DerivedRates {
  double lfc_strength = 0;    // L = N lambda^3 / 4 pi^2
  double gamma = 0;           // gamma31 + gamma32 + gamma_s, total width of rho31
  double gamma_dec = 0;       // gamma_deph + gamma_s, Raman coherence decay
  double delta = 0;           // two-photon detuning delta31 - delta32
  double delta31_tilde = 0;   // delta31 + L gamma31 / 2 when the LFC is on
  cplx rate31{};              // gamma/2 - i delta31
  cplx rate21{};              // gamma_dec - i delta
  double beta1 = 0;           // quadratic-dispersion absorption coefficient, per unit k0z
  double beta2 = 0;           // quadratic-dispersion phase coefficient, per unit k0z
  double group_delay = 0;     // 3 L gamma31 k0z / |omega32|^2, full medium
  double n_g = 0;             // group index, scales with omega0_over_gamma
  double coupling_gz = 0;     // 1.5 L gamma31 k0z, source strength over the full medium
  double dt_max = 0;          // atomic integrator step bound 0.05 / max rate
};

DerivedRates derive_rates(const SystemConfig& cfg);

std::vector<double> tau_axis(const GridConfig& grid);

// Gaussian probe envelope sampled on tau_axis(cfg.grid).
std::vector<cplx> gaussian_input(const SystemConfig& cfg);

// Named parameter sets. Unknown name throws config_error.
std::vector<std::string> preset_names();
SystemConfig preset(const std::string& name);

// JSON round trip. Parsing is strict: unknown keys and type mismatches throw
// config_error naming the offending key. to_json emits sorted keys so equal
// configs serialize identically.
SystemConfig config_from_json(const std::string& text);
std::string config_to_json(const SystemConfig& cfg);

}  // namespace eitsim
