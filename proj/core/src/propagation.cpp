#include "eitsim/propagation.hpp"

#include <cmath>
#include <sstream>

#include "eitsim/bloch.hpp"

namespace eitsim {

double coupling_constant(const SystemConfig& cfg) {
  return derive_rates(cfg).coupling_gz;
}

namespace {

struct March {
  const SystemConfig& cfg;
  const DerivedRates rates;
  const detail::ModelParams params;
  int n_sub;
  double dt, dtau;

  explicit March(const SystemConfig& c)
      : cfg(c), rates(derive_rates(c)), params(detail::ModelParams::make(c, rates)) {
    dtau = 2 * c.grid.tau_half_width / (c.grid.n_tau - 1);
    n_sub = std::max(1, (int)std::ceil(dtau / rates.dt_max * (1 - 1e-12)));
    dt = dtau / n_sub;
  }

  // One atomic history along the whole tau line; writes rho31 (and rho32 when
  // the control marches too) at every sample, reading the fields by linear
  // interpolation inside each interval.
  void integrate_line_full(const std::vector<cplx>& f31,
                           const std::vector<cplx>& f32, std::vector<cplx>& p31,
                           std::vector<cplx>* p32) const {
    DensityMatrix st = cfg.initial_state == InitialState::mixed12
                           ? DensityMatrix::mixed12()
                           : DensityMatrix::ground1();
    const int n = cfg.grid.n_tau;
    p31[0] = st.r31;
    if (p32) (*p32)[0] = st.r32;
    for (int i = 0; i + 1 < n; ++i) {
      const cplx a0 = f31[i];
      const cplx da = (f31[i + 1] - f31[i]) / (double)n_sub;
      const cplx b0 = f32[i];
      const cplx db = (f32[i + 1] - f32[i]) / (double)n_sub;
      for (int j = 0; j < n_sub; ++j) {
        const cplx aj = a0 + (double)j * da;
        const cplx bj = b0 + (double)j * db;
        rk4_full(st, aj, aj + 0.5 * da, aj + da, bj, bj + 0.5 * db, bj + db);
      }
      p31[i + 1] = st.r31;
      if (p32) (*p32)[i + 1] = st.r32;
    }
  }

  void integrate_line_linear(const std::vector<cplx>& f31,
                             std::vector<cplx>& p31) const {
    LinearizedState st;
    const int n = cfg.grid.n_tau;
    p31[0] = st.rho31;
    for (int i = 0; i + 1 < n; ++i) {
      const cplx a0 = f31[i];
      const cplx da = (f31[i + 1] - f31[i]) / (double)n_sub;
      for (int j = 0; j < n_sub; ++j) {
        const cplx aj = a0 + (double)j * da;
        const cplx om[3] = {aj, aj + 0.5 * da, aj + da};
        step_rk4(st, om, cfg.omega32, dt, cfg, rates);
      }
      p31[i + 1] = st.rho31;
    }
  }

 private:
  void rk4_full(DensityMatrix& s, cplx a0, cplx ah, cplx a1, cplx b0, cplx bh,
                cplx b1) const {
    const DensityMatrix k1 = detail::rhs_full(s, a0, b0, params);
    DensityMatrix t = s;
    axpy(t, k1, dt / 2);
    const DensityMatrix k2 = detail::rhs_full(t, ah, bh, params);
    t = s;
    axpy(t, k2, dt / 2);
    const DensityMatrix k3 = detail::rhs_full(t, ah, bh, params);
    t = s;
    axpy(t, k3, dt);
    const DensityMatrix k4 = detail::rhs_full(t, a1, b1, params);
    s.p11 += dt / 6 * (k1.p11 + 2 * k2.p11 + 2 * k3.p11 + k4.p11);
    s.p22 += dt / 6 * (k1.p22 + 2 * k2.p22 + 2 * k3.p22 + k4.p22);
    s.p33 += dt / 6 * (k1.p33 + 2 * k2.p33 + 2 * k3.p33 + k4.p33);
    s.r21 += dt / 6 * (k1.r21 + 2.0 * k2.r21 + 2.0 * k3.r21 + k4.r21);
    s.r31 += dt / 6 * (k1.r31 + 2.0 * k2.r31 + 2.0 * k3.r31 + k4.r31);
    s.r32 += dt / 6 * (k1.r32 + 2.0 * k2.r32 + 2.0 * k3.r32 + k4.r32);
  }

  static void axpy(DensityMatrix& y, const DensityMatrix& x, double w) {
    y.p11 += w * x.p11;
    y.p22 += w * x.p22;
    y.p33 += w * x.p33;
    y.r21 += w * x.r21;
    y.r31 += w * x.r31;
    y.r32 += w * x.r32;
  }
};

void check_line(const std::vector<cplx>& f, int iz, double cap) {
  for (size_t i = 0; i < f.size(); ++i) {
    const double m = std::abs(f[i]);
    if (!std::isfinite(m) || m > cap) {
      std::ostringstream msg;
      msg << "field diverged at z index " << iz << ", tau index " << i;
      throw solver_error(msg.str());
    }
  }
}

}  // namespace

FieldRecord propagate(const SystemConfig& cfg) {
  return propagate(cfg, gaussian_input(cfg));
}

FieldRecord propagate(const SystemConfig& cfg, const std::vector<cplx>& input) {
  require_valid(cfg);
  if ((int)input.size() != cfg.grid.n_tau)
    throw config_error("input line length must equal grid.n_tau");

  const March m(cfg);
  const int n_z = cfg.grid.n_z;
  const int n_tau = cfg.grid.n_tau;
  const double dz = 1.0 / (n_z - 1);
  const double g31z = m.rates.coupling_gz;
  const double g32z = 1.5 * m.rates.lfc_strength * cfg.gamma32 * cfg.k0z;
  const cplx idz(0, dz);

  double in_max = 0;
  for (const cplx& v : input) in_max = std::max(in_max, std::abs(v));
  const double cap = 10 * std::max(in_max, cfg.probe_amp) + 1e-300;

  FieldRecord rec;
  rec.tau = tau_axis(cfg.grid);
  rec.n_z_total = n_z;
  const int stride = cfg.store_every;
  auto stored = [&](int iz) {
    if (iz == 0 || iz == n_z - 1) return true;
    return stride > 0 && iz % stride == 0;
  };

  std::vector<cplx> f31 = input;
  std::vector<cplx> f32(n_tau, cplx(cfg.omega32));
  std::vector<cplx> p31(n_tau), p31s(n_tau), p32(n_tau), p32s(n_tau);
  std::vector<cplx> f31p(n_tau), f32p(n_tau);
  const bool ctrl = cfg.propagate_control;

  auto integrate = [&](const std::vector<cplx>& a, const std::vector<cplx>& b,
                       std::vector<cplx>& out31, std::vector<cplx>* out32) {
    if (cfg.use_linearized_eom) m.integrate_line_linear(a, out31);
    else m.integrate_line_full(a, b, out31, out32);
  };

  auto store = [&](int iz, const std::vector<cplx>& atoms) {
    rec.z.push_back(iz * dz);
    rec.omega31.push_back(f31);
    if (ctrl) rec.omega32.push_back(f32);
    rec.rho31.push_back(atoms);
  };

  for (int iz = 0; iz + 1 < n_z; ++iz) {
    integrate(f31, f32, p31, ctrl ? &p32 : nullptr);
    if (stored(iz)) store(iz, p31);

    // resolution guard on the actual solution, not an a-priori estimate
    double p_max = 0;
    for (const cplx& v : p31) p_max = std::max(p_max, std::abs(v));
    if (g31z * dz * p_max > 0.05)
      throw config_error(
          "z step too coarse: g*dz*max|rho31| > 0.05; increase grid.n_z");

    for (int i = 0; i < n_tau; ++i) f31p[i] = f31[i] + idz * g31z * p31[i];
    if (ctrl)
      for (int i = 0; i < n_tau; ++i) f32p[i] = f32[i] + idz * g32z * p32[i];
    else
      f32p = f32;

    integrate(f31p, f32p, p31s, ctrl ? &p32s : nullptr);

    for (int i = 0; i < n_tau; ++i)
      f31[i] += idz * g31z * 0.5 * (p31[i] + p31s[i]);
    if (ctrl)
      for (int i = 0; i < n_tau; ++i)
        f32[i] += idz * g32z * 0.5 * (p32[i] + p32s[i]);

    check_line(f31, iz + 1, cap);
  }

  integrate(f31, f32, p31, ctrl ? &p32 : nullptr);
  store(n_z - 1, p31);
  return rec;
}

}  // namespace eitsim
