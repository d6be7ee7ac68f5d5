#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "eitsim/acceptance.hpp"
#include "eitsim/analytic.hpp"
#include "eitsim/config.hpp"
#include "eitsim/csv.hpp"
#include "eitsim/manifest.hpp"
#include "eitsim/propagation.hpp"
#include "eitsim/scan.hpp"
#include "eitsim/susceptibility.hpp"
#include "eitsim/types.hpp"

namespace fs = std::filesystem;
using namespace eitsim;

namespace {

int default_workers() {
  if (const char* env = std::getenv("SIM_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return (int)v;
    std::cerr << "warning: ignoring SIM_WORKERS='" << env << "'\n";
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? (int)hw : 1;
}

SystemConfig load_config(const std::string& file, const std::string& name) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open config file '" + file + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
  }
  return preset(name.empty() ? "fig3-baseline" : name);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw config_error("cannot write '" + p.string() + "'");
  return out;
}

void finish(std::ofstream& out, const fs::path& p) {
  out.flush();
  if (!out) throw config_error("write failed for '" + p.string() + "'");
}

double princ(double a) {
  while (a > pi) a -= 2 * pi;
  while (a < -pi) a += 2 * pi;
  return a;
}

nlohmann::json metrics_json(const PulseMetrics& pm) {
  return nlohmann::json{{"peak_ratio", pm.peak_ratio},
                        {"peak_tau", pm.peak_tau},
                        {"width", pm.width},
                        {"width2", pm.width2},
                        {"phase_at_peak", pm.phase_at_peak},
                        {"chirp_slope", pm.chirp_slope},
                        {"chirp_intercept", pm.chirp_intercept},
                        {"chirp_residual", pm.chirp_residual},
                        {"peak_at_boundary", pm.peak_at_boundary},
                        {"degenerate_fit", pm.degenerate_fit}};
}

void cmd_susceptibility(const SystemConfig& cfg, double dmin, double dmax,
                        int points, const std::string& out_dir) {
  if (points < 2 || !(dmax > dmin))
    throw config_error("need --points >= 2 and --max > --min");
  derive_rates(cfg);  // surface parameter problems before any output

  std::ostringstream body;
  body << csv_row({"delta31", "re_chi", "im_chi", "re_k", "im_k"});
  for (int i = 0; i < points; ++i) {
    const double d = dmin + (dmax - dmin) * i / (points - 1);
    const cplx x = chi(cfg, d);
    const cplx k = wave_number(cfg, d);
    body << csv_row({g17(d), g17(x.real()), g17(x.imag()), g17(k.real()),
                     g17(k.imag())});
  }
  if (out_dir.empty()) {
    std::cout << body.str();
    return;
  }
  fs::create_directories(out_dir);
  const fs::path p = fs::path(out_dir) / "chi.csv";
  std::ofstream out = open_out(p);
  out << body.str();
  finish(out, p);
  write_manifest(out_dir, "susceptibility", cfg, {"chi.csv"});
}

void cmd_propagate(SystemConfig cfg, int store_every, const std::string& out_dir) {
  if (store_every >= 0) cfg.store_every = store_every;
  const FieldRecord rec = propagate(cfg);
  fs::create_directories(out_dir);

  const bool ctrl = !rec.omega32.empty();
  {
    const fs::path p = fs::path(out_dir) / "field.csv";
    std::ofstream out = open_out(p);
    std::vector<std::string> head{"z", "tau", "re_omega31", "im_omega31"};
    if (ctrl) {
      head.push_back("re_omega32");
      head.push_back("im_omega32");
    }
    out << csv_row(head);
    for (size_t s = 0; s < rec.z.size(); ++s) {
      for (size_t i = 0; i < rec.tau.size(); ++i) {
        std::vector<std::string> row{g17(rec.z[s]), g17(rec.tau[i]),
                                     g17(rec.omega31[s][i].real()),
                                     g17(rec.omega31[s][i].imag())};
        if (ctrl) {
          row.push_back(g17(rec.omega32[s][i].real()));
          row.push_back(g17(rec.omega32[s][i].imag()));
        }
        out << csv_row(row);
      }
    }
    finish(out, p);
  }
  {
    const PulseMetrics pin = measure_pulse(rec, 0, cfg);
    const PulseMetrics pout = measure_pulse(rec, (int)rec.z.size() - 1, cfg);
    const DerivedRates r = derive_rates(cfg);
    nlohmann::json j{
        {"input", metrics_json(pin)},
        {"output", metrics_json(pout)},
        {"delay", pout.peak_tau - pin.peak_tau},
        {"derived",
         {{"lfc_strength", r.lfc_strength},
          {"gamma", r.gamma},
          {"gamma_dec", r.gamma_dec},
          {"group_delay", r.group_delay},
          {"beta1", r.beta1},
          {"beta2", r.beta2},
          {"n_g", r.n_g},
          {"coupling_gz", r.coupling_gz}}}};
    const fs::path p = fs::path(out_dir) / "metrics.json";
    std::ofstream out = open_out(p);
    out << j.dump(2) << "\n";
    finish(out, p);
  }
  write_manifest(out_dir, "propagate", cfg, {"field.csv", "metrics.json"});
}

void cmd_analyze(const SystemConfig& cfg, double z, const std::string& out_dir) {
  if (!(z >= 0 && z <= 1))
    throw config_error("--z is a depth fraction and must lie in [0, 1]");
  const AnalyticPulse ana = make_analytic(cfg);
  const std::vector<double> tau = tau_axis(cfg.grid);

  FieldRecord rec;
  rec.z = {z};
  rec.tau = tau;
  rec.omega31.emplace_back();
  for (double t : tau) rec.omega31[0].push_back(analytic_envelope(ana, z, t));
  const PulseMetrics pm = measure_pulse(rec, 0, cfg);

  fs::create_directories(out_dir);
  {
    const fs::path p = fs::path(out_dir) / "envelope.csv";
    std::ofstream out = open_out(p);
    out << csv_row({"tau", "re_env", "im_env", "phase", "inst_freq"});
    for (size_t i = 0; i < tau.size(); ++i)
      out << csv_row({g17(tau[i]), g17(rec.omega31[0][i].real()),
                      g17(rec.omega31[0][i].imag()), g17(pm.phase[i]),
                      g17(pm.inst_freq[i])});
    finish(out, p);
  }
  {
    const fs::path p = fs::path(out_dir) / "polarization.csv";
    std::ofstream out = open_out(p);
    out << csv_row({"tau", "p0_phase", "plfc_phase"});
    for (double t : tau) {
      const PolarizationComponents pc = polarization_components(ana, z, t);
      const double ref = std::arg(analytic_envelope(ana, z, t));
      out << csv_row({g17(t), g17(princ(std::arg(pc.p0) - ref)),
                      g17(princ(std::arg(pc.p_lfc) - ref))});
    }
    finish(out, p);
  }
  {
    // Kerr comparator matched so both phase profiles share the same peak:
    // n2*I0 = beta2 / sigma^2
    const double n2i0 = ana.beta2 / (ana.sigma * ana.sigma);
    const fs::path p = fs::path(out_dir) / "nsm.csv";
    std::ofstream out = open_out(p);
    out << csv_row({"tau", "phase_exact", "phase_leading", "phase_kerr"});
    for (size_t i = 0; i < tau.size(); ++i) {
      const double u = tau[i] - ana.delay * z;
      out << csv_row({g17(tau[i]), g17(pm.phase[i]),
                      g17(phi_lfc(ana, z, tau[i])),
                      g17(phi_nsm(u, n2i0, ana.k0z * z, ana.sigma))});
    }
    finish(out, p);
  }
  write_manifest(out_dir, "analyze", cfg,
                 {"envelope.csv", "polarization.csv", "nsm.csv"});
}

void cmd_scan(const SystemConfig& cfg, const ScanAxis& gs, const ScanAxis& trap,
              int workers, const std::string& out_dir) {
  ScanRequest req;
  req.base = cfg;
  req.gs = gs;
  req.trap = trap;
  req.workers = workers;
  const TransmissionMap map = run_scan(req);

  fs::create_directories(out_dir);
  {
    const fs::path p = fs::path(out_dir) / "map.csv";
    std::ofstream out = open_out(p);
    out << csv_row({"gs", "trap_ratio", "peak_ratio", "flag"});
    for (int i = 0; i < map.n_gs; ++i)
      for (int j = 0; j < map.n_trap; ++j)
        out << csv_row({g17(map.gs[i]), g17(map.trap[j]), g17(map.at(i, j)),
                        std::to_string((int)map.flag[(size_t)i * map.n_trap + j])});
    finish(out, p);
  }
  {
    const std::vector<double> levels{0.5, 0.25, 0.01};
    nlohmann::json j;
    j["levels"] = levels;
    j["contours"] = nlohmann::json::array();
    for (const ContourLine& c : extract_contours(map, levels)) {
      nlohmann::json line;
      line["level"] = c.level;
      line["points"] = nlohmann::json::array();
      line["points_index"] = nlohmann::json::array();
      for (const auto& pt : c.points)
        line["points"].push_back({pt[0], pt[1]});
      for (const auto& pt : c.points_index)
        line["points_index"].push_back({pt[0], pt[1]});
      j["contours"].push_back(std::move(line));
    }
    const fs::path p = fs::path(out_dir) / "contours.json";
    std::ofstream out = open_out(p);
    out << j.dump(2) << "\n";
    finish(out, p);
  }
  write_manifest(out_dir, "scan", cfg, {"map.csv", "contours.json"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak-probe pulse propagation through a dense three-level medium"};
  app.set_version_flag("--version", version_string);
  app.require_subcommand(1);

  std::string sus_preset, sus_config, sus_out;
  double sus_min = -8, sus_max = 8;
  int sus_points = 1601;
  auto* sus = app.add_subcommand(
      "susceptibility", "tabulate chi(delta31) and the complex phase k*z");
  auto* sp = sus->add_option("--preset", sus_preset, "named parameter set");
  auto* sc = sus->add_option("--config", sus_config, "JSON config file");
  sp->excludes(sc);
  sc->excludes(sp);
  sus->add_option("--min", sus_min, "detuning range start, gamma31 units");
  sus->add_option("--max", sus_max, "detuning range end");
  sus->add_option("--points", sus_points, "sample count");
  sus->add_option("--out", sus_out, "output directory (stdout when omitted)");

  std::string prop_preset, prop_config, prop_out;
  int prop_store = -1;
  auto* prop = app.add_subcommand("propagate", "march the pulse through the medium");
  auto* pp = prop->add_option("--preset", prop_preset, "named parameter set");
  auto* pc = prop->add_option("--config", prop_config, "JSON config file");
  pp->excludes(pc);
  pc->excludes(pp);
  prop->add_option("--store-every", prop_store,
                   "keep every k-th z slab (overrides the config)")
      ->check(CLI::NonNegativeNumber);
  prop->add_option("--out", prop_out, "output directory")->required();

  std::string ana_preset, ana_config, ana_out;
  double ana_z = 1.0;
  auto* ana = app.add_subcommand(
      "analyze", "closed-form pulse, polarization phases, Kerr comparator");
  auto* ap = ana->add_option("--preset", ana_preset, "named parameter set");
  auto* ac = ana->add_option("--config", ana_config, "JSON config file");
  ap->excludes(ac);
  ac->excludes(ap);
  ana->add_option("--z", ana_z, "depth fraction in [0, 1]");
  ana->add_option("--out", ana_out, "output directory")->required();

  std::string scan_preset, scan_config, scan_out;
  ScanAxis scan_gs{2e-6, 0.2, 24}, scan_trap{0.5, 0.999, 24};
  int scan_workers = default_workers();
  auto* scn = app.add_subcommand(
      "scan", "transmitted peak ratio over (gamma_s, trap_ratio)");
  auto* np = scn->add_option("--preset", scan_preset, "named parameter set");
  auto* nc = scn->add_option("--config", scan_config, "JSON config file");
  np->excludes(nc);
  nc->excludes(np);
  scn->add_option("--gs-min", scan_gs.min, "gamma_s axis start (log-spaced)");
  scn->add_option("--gs-max", scan_gs.max, "gamma_s axis end");
  scn->add_option("--gs-steps", scan_gs.steps, "gamma_s sample count");
  scn->add_option("--trap-min", scan_trap.min, "trap_ratio axis start");
  scn->add_option("--trap-max", scan_trap.max, "trap_ratio axis end");
  scn->add_option("--trap-steps", scan_trap.steps, "trap_ratio sample count");
  scn->add_option("--workers", scan_workers,
                  "cell threads (default: SIM_WORKERS or hardware)");
  scn->add_option("--out", scan_out, "output directory")->required();

  auto* pre = app.add_subcommand("presets", "named parameter sets");
  pre->require_subcommand(1);
  pre->require_subcommand(1);
  auto* pre_list = pre->add_subcommand("list", "print preset names");
  std::string show_name;
  auto* pre_show = pre->add_subcommand("show", "print one preset as JSON");
  pre_show->add_option("name", show_name, "preset name")->required();
  std::string dump_dir;
  auto* pre_dump = pre->add_subcommand("dump", "write every preset as <name>.json");
  pre_dump->add_option("dir", dump_dir, "target directory")->required();

  int st_workers = default_workers();
  auto* st = app.add_subcommand("selftest", "run the physics acceptance checks");
  st->add_option("--workers", st_workers, "threads for the map sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sus->parsed()) {
      cmd_susceptibility(load_config(sus_config, sus_preset), sus_min, sus_max,
                         sus_points, sus_out);
    } else if (prop->parsed()) {
      cmd_propagate(load_config(prop_config, prop_preset), prop_store, prop_out);
    } else if (ana->parsed()) {
      cmd_analyze(load_config(ana_config, ana_preset), ana_z, ana_out);
    } else if (scn->parsed()) {
      if (scan_workers < 1) throw config_error("--workers must be >= 1");
      cmd_scan(load_config(scan_config, scan_preset), scan_gs, scan_trap,
               scan_workers, scan_out);
    } else if (pre->parsed()) {
      if (pre_list->parsed()) {
        for (const std::string& n : preset_names()) std::cout << n << "\n";
      } else if (pre_show->parsed()) {
        std::cout << config_to_json(preset(show_name));
      } else if (pre_dump->parsed()) {
        fs::create_directories(dump_dir);
        for (const std::string& n : preset_names()) {
          const fs::path p = fs::path(dump_dir) / (n + ".json");
          std::ofstream out = open_out(p);
          out << config_to_json(preset(n));
          finish(out, p);
        }
      }
    } else if (st->parsed()) {
      if (st_workers < 1) throw config_error("--workers must be >= 1");
      const AcceptanceReport rep = run_acceptance(std::cout, st_workers);
      return rep.all_pass ? 0 : 3;
    }
    return 0;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const solver_error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
