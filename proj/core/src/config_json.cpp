#include <nlohmann/json.hpp>

#include "eitsim/config.hpp"

namespace eitsim {

using nlohmann::json;

namespace {

double take_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw config_error(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

int take_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw config_error(std::string("key '") + key + "' must be an integer");
  return v.get<int>();
}

bool take_bool(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw config_error(std::string("key '") + key + "' must be a boolean");
  return v.get<bool>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const char* scope) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known)
      if (key == k) { ok = true; break; }
    if (!ok)
      throw config_error(std::string("unknown key '") + key + "' in " + scope);
  }
}

}  // namespace

SystemConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config root must be a JSON object");

  reject_unknown(j, {"gamma31", "gamma32", "gamma_s", "gamma_deph", "delta31",
                     "delta32", "omega32", "probe_amp", "probe_width",
                     "n_lambda3", "trap_ratio", "k0z", "omega0_over_gamma",
                     "lfc_on", "lfc_control_on", "trapping_on",
                     "propagate_control", "use_linearized_eom", "initial_state",
                     "grid", "store_every"},
                 "config");

  SystemConfig c;
  c.gamma31 = take_number(j, "gamma31", c.gamma31);
  c.gamma32 = take_number(j, "gamma32", c.gamma32);
  c.gamma_s = take_number(j, "gamma_s", c.gamma_s);
  c.gamma_deph = take_number(j, "gamma_deph", c.gamma_deph);
  c.delta31 = take_number(j, "delta31", c.delta31);
  c.delta32 = take_number(j, "delta32", c.delta32);
  c.omega32 = take_number(j, "omega32", c.omega32);
  c.probe_amp = take_number(j, "probe_amp", c.probe_amp);
  c.probe_width = take_number(j, "probe_width", c.probe_width);
  c.n_lambda3 = take_number(j, "n_lambda3", c.n_lambda3);
  c.trap_ratio = take_number(j, "trap_ratio", c.trap_ratio);
  c.k0z = take_number(j, "k0z", c.k0z);
  c.omega0_over_gamma = take_number(j, "omega0_over_gamma", c.omega0_over_gamma);
  c.lfc_on = take_bool(j, "lfc_on", c.lfc_on);
  c.lfc_control_on = take_bool(j, "lfc_control_on", c.lfc_control_on);
  c.trapping_on = take_bool(j, "trapping_on", c.trapping_on);
  c.propagate_control = take_bool(j, "propagate_control", c.propagate_control);
  c.use_linearized_eom = take_bool(j, "use_linearized_eom", c.use_linearized_eom);
  c.store_every = take_int(j, "store_every", c.store_every);

  if (j.contains("initial_state")) {
    const json& v = j.at("initial_state");
    if (!v.is_string()) throw config_error("key 'initial_state' must be a string");
    const std::string s = v.get<std::string>();
    if (s == "ground1") c.initial_state = InitialState::ground1;
    else if (s == "mixed12") c.initial_state = InitialState::mixed12;
    else throw config_error("initial_state must be 'ground1' or 'mixed12', got '" + s + "'");
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (!g.is_object()) throw config_error("key 'grid' must be an object");
    reject_unknown(g, {"n_z", "n_tau", "tau_half_width"}, "grid");
    c.grid.n_z = take_int(g, "n_z", c.grid.n_z);
    c.grid.n_tau = take_int(g, "n_tau", c.grid.n_tau);
    c.grid.tau_half_width = take_number(g, "tau_half_width", c.grid.tau_half_width);
  }
  return c;
}

std::string config_to_json(const SystemConfig& c) {
  json j;
  j["gamma31"] = c.gamma31;
  j["gamma32"] = c.gamma32;
  j["gamma_s"] = c.gamma_s;
  j["gamma_deph"] = c.gamma_deph;
  j["delta31"] = c.delta31;
  j["delta32"] = c.delta32;
  j["omega32"] = c.omega32;
  j["probe_amp"] = c.probe_amp;
  j["probe_width"] = c.probe_width;
  j["n_lambda3"] = c.n_lambda3;
  j["trap_ratio"] = c.trap_ratio;
  j["k0z"] = c.k0z;
  j["omega0_over_gamma"] = c.omega0_over_gamma;
  j["lfc_on"] = c.lfc_on;
  j["lfc_control_on"] = c.lfc_control_on;
  j["trapping_on"] = c.trapping_on;
  j["propagate_control"] = c.propagate_control;
  j["use_linearized_eom"] = c.use_linearized_eom;
  j["initial_state"] = c.initial_state == InitialState::ground1 ? "ground1" : "mixed12";
  j["grid"] = {{"n_z", c.grid.n_z},
               {"n_tau", c.grid.n_tau},
               {"tau_half_width", c.grid.tau_half_width}};
  j["store_every"] = c.store_every;
  return j.dump(2) + "\n";
}

}  // namespace eitsim
