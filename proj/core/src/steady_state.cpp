#include <cmath>
#include <limits>
#include <sstream>

#include "eitsim/bloch.hpp"

namespace eitsim {

namespace {

using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;

// Real coordinates of the Hermitian state: populations, then Re/Im of the
// lower-triangle coherences.
Vec9 pack(const DensityMatrix& s) {
  Vec9 x;
  x << s.p11, s.p22, s.p33, s.r21.real(), s.r21.imag(), s.r31.real(),
      s.r31.imag(), s.r32.real(), s.r32.imag();
  return x;
}

DensityMatrix unpack(const Vec9& x) {
  DensityMatrix s;
  s.p11 = x[0];
  s.p22 = x[1];
  s.p33 = x[2];
  s.r21 = {x[3], x[4]};
  s.r31 = {x[5], x[6]};
  s.r32 = {x[7], x[8]};
  return s;
}

// The generator at frozen pumps and frozen microscopic fields is linear over
// these real coordinates (conjugation is real-linear), so its matrix is read
// off column by column.
Mat9 frozen_generator(cplx om31m, cplx om32m, const detail::ModelParams& p) {
  Mat9 m;
  for (int j = 0; j < 9; ++j) {
    Vec9 e = Vec9::Zero();
    e[j] = 1;
    m.col(j) = pack(detail::rhs_full(unpack(e), om31m, om32m, p));
  }
  return m;
}

double max_diff(const DensityMatrix& a, const DensityMatrix& b) {
  double m = std::max({std::abs(a.p11 - b.p11), std::abs(a.p22 - b.p22),
                       std::abs(a.p33 - b.p33)});
  m = std::max(m, std::abs(a.r21 - b.r21));
  m = std::max(m, std::abs(a.r31 - b.r31));
  m = std::max(m, std::abs(a.r32 - b.r32));
  return m;
}

DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double w) {
  DensityMatrix o;
  o.p11 = a.p11 + w * (b.p11 - a.p11);
  o.p22 = a.p22 + w * (b.p22 - a.p22);
  o.p33 = a.p33 + w * (b.p33 - a.p33);
  o.r21 = a.r21 + w * (b.r21 - a.r21);
  o.r31 = a.r31 + w * (b.r31 - a.r31);
  o.r32 = a.r32 + w * (b.r32 - a.r32);
  return o;
}

}  // namespace

DensityMatrix steady_state(cplx om31, const SystemConfig& cfg,
                           const DerivedRates& rates, SteadyStateInfo* info) {
  SteadyStateInfo local;
  SteadyStateInfo& st = info ? *info : local;
  st = {};

  detail::ModelParams frozen = detail::ModelParams::make(cfg, rates);
  frozen.Lp = frozen.Lc = 0;  // mean field enters through the frozen envelopes
  frozen.trapR = 0;

  DensityMatrix rho =
      cfg.initial_state == InitialState::mixed12 ? DensityMatrix::mixed12()
                                                 : DensityMatrix::ground1();
  const double tol = 1e-12;
  double weight = 1.0;
  double prev_delta = std::numeric_limits<double>::infinity();
  bool solve_ok = true;

  for (int iter = 1; iter <= 200; ++iter) {
    st.iterations = iter;
    const LocalFields f = local_fields(om31, cfg.omega32, rho, cfg, rates);
    const PumpRates R = trapping_rates(rho, cfg);
    frozen.R31_extra = R.R31;
    frozen.R32_extra = R.R32;

    Mat9 m = frozen_generator(f.omega31_mic, f.omega32_mic, frozen);
    m.row(0) << 1, 1, 1, 0, 0, 0, 0, 0, 0;  // trace pins the kernel direction
    Vec9 b = Vec9::Zero();
    b[0] = 1;
    const Vec9 x = m.partialPivLu().solve(b);
    if (!x.allFinite() || (m * x - b).cwiseAbs().maxCoeff() > 1e-8) {
      solve_ok = false;  // degenerate generator; integration decides
      break;
    }
    const DensityMatrix next = unpack(x);
    const double delta = max_diff(next, rho);
    if (delta < tol) {
      st.residual = delta;
      return next;
    }
    // the pump feedback contracts slowly near trap_ratio -> 1; damp only
    // when the iteration actually overshoots
    if (delta > prev_delta) weight = std::max(0.25 * weight, 0.05);
    else weight = std::min(1.0, 1.2 * weight);
    rho = mix(rho, next, weight);
    prev_delta = delta;
    st.residual = delta;
  }

  // Long-time integration: robust against the slow trapping mode that the
  // fixed point cannot contract fast enough.
  st.used_fallback = true;
  (void)solve_ok;
  const double dt = rates.dt_max;
  const double chunk_time = 50.0 / cfg.gamma31;
  const int steps_per_chunk = std::max(1, (int)std::ceil(chunk_time / dt));
  const double total_cap = 4e4 / cfg.gamma31;
  const cplx om31s[3] = {om31, om31, om31};
  const cplx om32s[3] = {cfg.omega32, cfg.omega32, cfg.omega32};

  double t = 0;
  while (t < total_cap) {
    const DensityMatrix before = rho;
    for (int i = 0; i < steps_per_chunk; ++i)
      step_rk4(rho, om31s, om32s, dt, cfg, rates);
    t += steps_per_chunk * dt;
    const double drift = max_diff(rho, before);
    st.residual = drift;
    if (drift < tol) return rho;
  }
  std::ostringstream msg;
  msg << "steady state did not settle: fixed point and long-time integration "
         "both left residual "
      << st.residual;
  throw solver_error(msg.str());
}

}  // namespace eitsim
