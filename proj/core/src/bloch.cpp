#include "eitsim/bloch.hpp"

#include <cmath>

namespace eitsim {

Eigen::Matrix3cd DensityMatrix::matrix() const {
  Eigen::Matrix3cd m;
  m << cplx(p11), std::conj(r21), std::conj(r31),
       r21,       cplx(p22),      std::conj(r32),
       r31,       r32,            cplx(p33);
  return m;
}

DensityMatrix DensityMatrix::from_matrix(const Eigen::Matrix3cd& m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw config_error("density matrix must be Hermitian");
  DensityMatrix s;
  s.p11 = m(0, 0).real();
  s.p22 = m(1, 1).real();
  s.p33 = m(2, 2).real();
  s.r21 = m(1, 0);
  s.r31 = m(2, 0);
  s.r32 = m(2, 1);
  if (std::abs(s.trace() - 1.0) > 1e-10)
    throw config_error("density matrix must have unit trace");
  return s;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(matrix(),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

LocalFields local_fields(cplx om31_ext, cplx om32_ext, const DensityMatrix& rho,
                         const SystemConfig& cfg, const DerivedRates& r) {
  LocalFields f;
  f.omega31_ext = om31_ext;
  f.omega32_ext = om32_ext;
  f.omega31_mic = om31_ext;
  f.omega32_mic = om32_ext;
  if (cfg.lfc_on) {
    f.omega31_mic += r.lfc_strength * cfg.gamma31 * rho.r31;
    if (cfg.lfc_control_on)
      f.omega32_mic += r.lfc_strength * cfg.gamma32 * rho.r32;
  }
  return f;
}

PumpRates trapping_rates(const DensityMatrix& rho, const SystemConfig& cfg) {
  if (!cfg.trapping_on) return {};
  return {cfg.gamma31 * cfg.trap_ratio * rho.p33,
          cfg.gamma32 * cfg.trap_ratio * rho.p33};
}

namespace detail {

ModelParams ModelParams::make(const SystemConfig& cfg, const DerivedRates& r) {
  ModelParams p;
  p.g31 = cfg.gamma31;
  p.g32 = cfg.gamma32;
  p.gs = cfg.gamma_s;
  p.d31 = cfg.delta31;
  p.d32 = cfg.delta32;
  p.d = r.delta;
  if (cfg.lfc_on) {
    p.Lp = r.lfc_strength * cfg.gamma31;
    if (cfg.lfc_control_on) p.Lc = r.lfc_strength * cfg.gamma32;
  }
  p.trapR = cfg.trapping_on ? cfg.trap_ratio : 0.0;
  p.c31 = 0.5 * (p.g31 + p.g32 + p.gs);
  p.c32 = p.c31;
  p.c21 = p.gs + cfg.gamma_deph;
  return p;
}

DensityMatrix rhs_full(const DensityMatrix& s, cplx om31, cplx om32,
                       const ModelParams& p) {
  const cplx a = 0.5 * (om31 + p.Lp * s.r31);
  const cplx b = 0.5 * (om32 + p.Lc * s.r32);
  const double R31 = p.g31 * p.trapR * s.p33 + p.R31_extra;
  const double R32 = p.g32 * p.trapR * s.p33 + p.R32_extra;

  const double pump31 = 2 * (std::conj(a) * s.r31).imag();  // coherent 1->3 flow
  const double pump32 = 2 * (std::conj(b) * s.r32).imag();
  const cplx i1(0, 1);

  DensityMatrix d;
  d.p11 = -pump31 + p.g31 * s.p33 + R31 * (s.p33 - s.p11) + p.gs * (s.p22 - s.p11);
  d.p22 = -pump32 + p.g32 * s.p33 + R32 * (s.p33 - s.p22) + p.gs * (s.p11 - s.p22);
  d.p33 = pump31 + pump32 - (p.g31 + p.g32) * s.p33 + R31 * (s.p11 - s.p33) +
          R32 * (s.p22 - s.p33);
  d.r31 = i1 * (p.d31 * s.r31 + a * (s.p11 - s.p33) + b * s.r21) -
          (p.c31 + R31 + 0.5 * R32) * s.r31;
  d.r21 = i1 * (p.d * s.r21 + std::conj(b) * s.r31 - a * std::conj(s.r32)) -
          (p.c21 + 0.5 * (R31 + R32)) * s.r21;
  d.r32 = i1 * (p.d32 * s.r32 + a * std::conj(s.r21) + b * (s.p22 - s.p33)) -
          (p.c32 + R32 + 0.5 * R31) * s.r32;
  return d;
}

}  // namespace detail

DensityMatrix lindblad_rhs(const DensityMatrix& rho, cplx om31, cplx om32,
                           const SystemConfig& cfg, const DerivedRates& r) {
  return detail::rhs_full(rho, om31, om32, detail::ModelParams::make(cfg, r));
}

DensityMatrix lindblad_rhs_reference(const DensityMatrix& rho, cplx om31,
                                     cplx om32, const SystemConfig& cfg,
                                     const DerivedRates& r) {
  using M3 = Eigen::Matrix3cd;
  const M3 p = rho.matrix();
  const LocalFields f = local_fields(om31, om32, rho, cfg, r);
  const PumpRates R = trapping_rates(rho, cfg);

  auto ketbra = [](int i, int j) {
    M3 m = M3::Zero();
    m(i, j) = 1;
    return m;
  };
  const M3 A11 = ketbra(0, 0), A22 = ketbra(1, 1), A33 = ketbra(2, 2);
  const M3 A31 = ketbra(2, 0), A32 = ketbra(2, 1), A21 = ketbra(1, 0);

  M3 H = -r.delta * A22 - cfg.delta31 * A33;
  H -= 0.5 * (f.omega31_mic * A31 + f.omega32_mic * A32);
  H -= 0.5 * (std::conj(f.omega31_mic) * A31.adjoint() +
              std::conj(f.omega32_mic) * A32.adjoint());

  auto dissip = [&p](const M3& A) {
    const M3 Ad = A.adjoint();
    return (A * p * Ad - 0.5 * (Ad * A * p + p * Ad * A)).eval();
  };

  M3 d = cplx(0, -1) * (H * p - p * H);
  d += cfg.gamma31 * dissip(A31.adjoint());
  d += cfg.gamma32 * dissip(A32.adjoint());
  d += R.R31 * (dissip(A31) + dissip(A31.adjoint()));
  d += R.R32 * (dissip(A32) + dissip(A32.adjoint()));
  d += cfg.gamma_s * (dissip(A21) + dissip(A21.adjoint()));
  d -= cfg.gamma_deph * (A22 * p * A11 + A11 * p * A22);

  DensityMatrix out;
  out.p11 = d(0, 0).real();
  out.p22 = d(1, 1).real();
  out.p33 = d(2, 2).real();
  out.r21 = d(1, 0);
  out.r31 = d(2, 0);
  out.r32 = d(2, 1);
  return out;
}

LinearizedState linearized_rhs(const LinearizedState& s, cplx om31,
                               const SystemConfig& cfg, const DerivedRates& r) {
  const cplx i1(0, 1);
  LinearizedState d;
  d.rho31 = -r.rate31 * s.rho31 + 0.5 * i1 * om31 +
            0.5 * i1 * cfg.omega32 * s.rho21;
  if (cfg.lfc_on)
    d.rho31 += 0.5 * i1 * r.lfc_strength * cfg.gamma31 * s.rho31;
  d.rho21 = -r.rate21 * s.rho21 + 0.5 * i1 * cfg.omega32 * s.rho31;
  return d;
}

namespace {

void check_dt(double dt, const DerivedRates& r) {
  if (!(dt > 0) || dt > r.dt_max * (1 + 1e-12))
    throw config_error("RK4 step exceeds dt_max = 0.05/max(rates)");
}

}  // namespace

void step_rk4(DensityMatrix& s, const cplx om31[3], const cplx om32[3],
              double dt, const SystemConfig& cfg, const DerivedRates& r) {
  check_dt(dt, r);
  const auto p = detail::ModelParams::make(cfg, r);
  const DensityMatrix k1 = detail::rhs_full(s, om31[0], om32[0], p);
  auto add = [](const DensityMatrix& a, const DensityMatrix& b, double w) {
    DensityMatrix o = a;
    o.p11 += w * b.p11; o.p22 += w * b.p22; o.p33 += w * b.p33;
    o.r21 += w * b.r21; o.r31 += w * b.r31; o.r32 += w * b.r32;
    return o;
  };
  const DensityMatrix k2 = detail::rhs_full(add(s, k1, dt / 2), om31[1], om32[1], p);
  const DensityMatrix k3 = detail::rhs_full(add(s, k2, dt / 2), om31[1], om32[1], p);
  const DensityMatrix k4 = detail::rhs_full(add(s, k3, dt), om31[2], om32[2], p);
  s.p11 += dt / 6 * (k1.p11 + 2 * k2.p11 + 2 * k3.p11 + k4.p11);
  s.p22 += dt / 6 * (k1.p22 + 2 * k2.p22 + 2 * k3.p22 + k4.p22);
  s.p33 += dt / 6 * (k1.p33 + 2 * k2.p33 + 2 * k3.p33 + k4.p33);
  s.r21 += dt / 6 * (k1.r21 + 2.0 * k2.r21 + 2.0 * k3.r21 + k4.r21);
  s.r31 += dt / 6 * (k1.r31 + 2.0 * k2.r31 + 2.0 * k3.r31 + k4.r31);
  s.r32 += dt / 6 * (k1.r32 + 2.0 * k2.r32 + 2.0 * k3.r32 + k4.r32);
}

void step_rk4(LinearizedState& s, const cplx om31[3], cplx /*om32*/, double dt,
              const SystemConfig& cfg, const DerivedRates& r) {
  check_dt(dt, r);
  auto rhs = [&](const LinearizedState& x, cplx om) {
    return linearized_rhs(x, om, cfg, r);
  };
  const LinearizedState k1 = rhs(s, om31[0]);
  const LinearizedState k2 = rhs({s.rho31 + dt / 2 * k1.rho31, s.rho21 + dt / 2 * k1.rho21}, om31[1]);
  const LinearizedState k3 = rhs({s.rho31 + dt / 2 * k2.rho31, s.rho21 + dt / 2 * k2.rho21}, om31[1]);
  const LinearizedState k4 = rhs({s.rho31 + dt * k3.rho31, s.rho21 + dt * k3.rho21}, om31[2]);
  s.rho31 += dt / 6 * (k1.rho31 + 2.0 * k2.rho31 + 2.0 * k3.rho31 + k4.rho31);
  s.rho21 += dt / 6 * (k1.rho21 + 2.0 * k2.rho21 + 2.0 * k3.rho21 + k4.rho21);
}

LinearizedState steady_state_linearized(cplx om31, const SystemConfig& cfg,
                                        const DerivedRates& r) {
  // 2x2 solve of the coherence pair with the source (i/2) om31
  const cplx i1(0, 1);
  const cplx a11 = r.rate31 - (cfg.lfc_on ? 0.5 * i1 * r.lfc_strength * cfg.gamma31 : cplx(0));
  const cplx a12 = -0.5 * i1 * cfg.omega32;
  const cplx a21 = -0.5 * i1 * cfg.omega32;
  const cplx a22 = r.rate21;
  const cplx det = a11 * a22 - a12 * a21;
  if (std::abs(det) < 1e-300)
    throw solver_error("linearized steady state is singular (dark pole)");
  const cplx b1 = 0.5 * i1 * om31;
  return {(a22 * b1) / det, (-a21 * b1) / det};
}

}  // namespace eitsim
