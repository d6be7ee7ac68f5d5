#include "eitsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eitsim {

namespace {

// Invariants that do not involve the grid; shared by validate_config and
// derive_rates so the latter stays usable with susceptibility-only configs
// that never touch the propagation grid.
void check_physical(const SystemConfig& c, std::vector<Diagnostic>& out) {
  auto bad = [&](const char* field, const std::string& msg) {
    out.push_back({field, msg});
  };
  if (!(c.gamma31 > 0)) bad("gamma31", "must be > 0 (it sets the unit system)");
  if (c.gamma32 < 0) bad("gamma32", "must be >= 0");
  if (c.gamma_s < 0) bad("gamma_s", "must be >= 0");
  if (c.gamma_deph < 0) bad("gamma_deph", "must be >= 0");
  if (!(c.probe_width > 0)) bad("probe_width", "must be > 0");
  if (c.probe_amp < 0) bad("probe_amp", "must be >= 0");
  if (c.omega32 < 0) bad("omega32", "must be >= 0 (phase belongs to the field records)");
  if (c.n_lambda3 < 0) bad("n_lambda3", "must be >= 0");
  if (!(c.trap_ratio >= 0 && c.trap_ratio < 1))
    bad("trap_ratio", "must lie in [0, 1); at 1 the reabsorption pump never drains");
  if (!(c.k0z > 0)) bad("k0z", "must be > 0");
  if (!(c.omega0_over_gamma > 0)) bad("omega0_over_gamma", "must be > 0");
  if (c.use_linearized_eom &&
      c.probe_amp > 1e-2 * std::max(c.omega32, c.gamma31))
    bad("probe_amp",
        "linearized equations need a weak probe: probe_amp <= 1e-2 * max(omega32, gamma31)");
  if (c.use_linearized_eom && c.propagate_control)
    bad("propagate_control",
        "control propagation needs the full density matrix; disable use_linearized_eom");
  if (!std::isfinite(c.gamma31) || !std::isfinite(c.gamma32) ||
      !std::isfinite(c.gamma_s) || !std::isfinite(c.gamma_deph) ||
      !std::isfinite(c.delta31) || !std::isfinite(c.delta32) ||
      !std::isfinite(c.omega32) || !std::isfinite(c.probe_amp) ||
      !std::isfinite(c.probe_width) || !std::isfinite(c.n_lambda3) ||
      !std::isfinite(c.k0z))
    bad("config", "non-finite parameter");
}

DerivedRates derive_unchecked(const SystemConfig& c) {
  DerivedRates r;
  r.lfc_strength = c.n_lambda3 / (4 * pi * pi);
  r.gamma = c.gamma31 + c.gamma32 + c.gamma_s;
  r.gamma_dec = c.gamma_deph + c.gamma_s;
  r.delta = c.delta31 - c.delta32;
  r.delta31_tilde = c.delta31 + r.lfc_strength * c.gamma31 / 2;
  r.rate31 = cplx(r.gamma / 2, -c.delta31);
  r.rate21 = cplx(r.gamma_dec, -r.delta);
  const double om2 = c.omega32 * c.omega32;
  const double om4 = om2 * om2;
  if (om2 > 0) {
    r.beta1 = 6 * r.lfc_strength * r.gamma * c.gamma31 / om4;
    r.beta2 = 6 * r.lfc_strength * r.lfc_strength * c.gamma31 * c.gamma31 / om4;
    r.group_delay = 3 * r.lfc_strength * c.gamma31 * c.k0z / om2;
    r.n_g = 3 * r.lfc_strength * c.gamma31 * (c.omega0_over_gamma * c.gamma31) / om2;
  }
  r.coupling_gz = 1.5 * r.lfc_strength * c.gamma31 * c.k0z;
  r.dt_max = 0.05 / std::max({r.gamma, c.omega32, std::abs(c.delta31),
                              std::abs(r.delta), c.gamma31});
  return r;
}

}  // namespace

std::vector<Diagnostic> validate_config(const SystemConfig& c) {
  std::vector<Diagnostic> out;
  check_physical(c, out);
  if (!out.empty()) return out;  // grid guards below assume sane rates

  const DerivedRates r = derive_unchecked(c);
  const GridConfig& g = c.grid;
  if (g.n_z < 2) out.push_back({"grid.n_z", "need at least the two faces"});
  if (g.n_tau < 2) out.push_back({"grid.n_tau", "need at least two samples"});
  if (!(g.tau_half_width > 0))
    out.push_back({"grid.tau_half_width", "must be > 0"});
  if (c.store_every < 0) out.push_back({"store_every", "must be >= 0"});
  if (!out.empty()) return out;

  const double dtau = 2 * g.tau_half_width / (g.n_tau - 1);
  const double slack = 1 + 1e-9;
  if (dtau > c.probe_width / 40 * slack)
    out.push_back({"grid.n_tau", "tau step must resolve the pulse: >= 40 samples per probe_width"});
  const double fastest = std::max({r.gamma, c.omega32, std::abs(c.delta31),
                                   std::abs(r.delta)});
  if (fastest > 0 && dtau > 1.0 / fastest * slack)
    out.push_back({"grid.n_tau",
                   "tau step must resolve the fastest Rabi/detuning scale (dtau <= 1/rate)"});
  if (g.tau_half_width < r.group_delay + 6 * c.probe_width)
    out.push_back({"grid.tau_half_width",
                   "window must cover the delay-shifted pulse with 6 probe_width margin"});
  return out;
}

void require_valid(const SystemConfig& c) {
  const auto diags = validate_config(c);
  if (diags.empty()) return;
  std::ostringstream msg;
  msg << "invalid config:";
  for (const auto& d : diags) msg << "\n  " << d.field << ": " << d.message;
  throw config_error(msg.str());
}

DerivedRates derive_rates(const SystemConfig& c) {
  std::vector<Diagnostic> diags;
  check_physical(c, diags);
  if (!diags.empty()) {
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& d : diags) msg << "\n  " << d.field << ": " << d.message;
    throw config_error(msg.str());
  }
  return derive_unchecked(c);
}

std::vector<double> tau_axis(const GridConfig& g) {
  std::vector<double> tau(g.n_tau);
  const double dtau = 2 * g.tau_half_width / (g.n_tau - 1);
  for (int i = 0; i < g.n_tau; ++i) tau[i] = -g.tau_half_width + i * dtau;
  return tau;
}

std::vector<cplx> gaussian_input(const SystemConfig& c) {
  const auto tau = tau_axis(c.grid);
  std::vector<cplx> env(tau.size());
  const double s2 = 2 * c.probe_width * c.probe_width;
  for (size_t i = 0; i < tau.size(); ++i)
    env[i] = c.probe_amp * std::exp(-tau[i] * tau[i] / s2);
  return env;
}

}  // namespace eitsim
