#include "eitsim/config.hpp"

namespace eitsim {

// Catalog notes, in gamma31 units (gamma31 = gamma32 = 1, so the total
// radiative width is gamma ~ 2):
//   control omega32 = 4        <-> 2 gamma
//   gamma_dec = 5.6e-3         <-> 2.8e-3 gamma (lab 100 kHz angular over 2pi*5.75 MHz)
//   gamma_s = 5.6e-5           <-> 2.8e-5 gamma (lab 1 kHz); gamma_deph makes up the rest
//   probe_width = 10           <-> sigma = 20/gamma
//   n_lambda3 = 50             <-> local-field strength L = 1.2665
//   k0z = 316                  <-> z = 40 um at lambda = 795 nm
// fig2a/fig2b differ only in density: L = 1e-5 (dilute reference curve) and
// L = 4 (reshaped window). fig4 is the baseline with the incoherent ground-state
// channels and trapping switched off, the regime of the closed-form pulse.

namespace {

SystemConfig baseline() {
  SystemConfig c;
  c.gamma31 = 1.0;
  c.gamma32 = 1.0;
  c.gamma_s = 5.6e-5;
  c.gamma_deph = 5.544e-3;
  c.delta31 = 0.0;
  c.delta32 = 0.0;
  c.omega32 = 4.0;
  c.probe_amp = 1e-3;
  c.probe_width = 10.0;
  c.n_lambda3 = 50.0;
  c.trap_ratio = 0.99;
  c.k0z = 316.0;
  c.omega0_over_gamma = 6.6e7;
  c.lfc_on = true;
  c.lfc_control_on = true;
  c.trapping_on = true;
  c.propagate_control = false;
  c.use_linearized_eom = false;
  c.initial_state = InitialState::ground1;
  c.grid = GridConfig{400, 1601, 160.0};
  c.store_every = 0;
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig3-baseline", "fig4"};
}

SystemConfig preset(const std::string& name) {
  if (name == "fig3-baseline") return baseline();
  if (name == "fig4") {
    SystemConfig c = baseline();
    c.gamma_s = 0.0;
    c.gamma_deph = 0.0;
    c.trapping_on = false;
    return c;
  }
  if (name == "fig2a" || name == "fig2b") {
    SystemConfig c = baseline();
    // susceptibility-curve presets: only the density differs between the two
    c.n_lambda3 = (name == "fig2a") ? 4 * pi * pi * 1e-5 : 4 * pi * pi * 4.0;
    c.trapping_on = false;
    return c;
  }
  throw config_error("unknown preset '" + name + "'");
}

}  // namespace eitsim
