#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "eitsim/bloch.hpp"
#include "eitsim/config.hpp"

using namespace eitsim;

namespace {

double state_norm(const DensityMatrix& s) {
  return std::max({std::abs(s.p11), std::abs(s.p22), std::abs(s.p33),
                   std::abs(s.r21), std::abs(s.r31), std::abs(s.r32)});
}

double state_diff(const DensityMatrix& a, const DensityMatrix& b) {
  return std::max({std::abs(a.p11 - b.p11), std::abs(a.p22 - b.p22),
                   std::abs(a.p33 - b.p33), std::abs(a.r21 - b.r21),
                   std::abs(a.r31 - b.r31), std::abs(a.r32 - b.r32)});
}

}  // namespace

TEST_SUITE("bloch") {

TEST_CASE("component right-hand side equals the matrix transcription") {
  // The optimized component form against a literal commutator-plus-dissipators
  // build, over random states, fields, and every toggle combination.
  std::mt19937 rng(7121);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto cval = [&] { return cplx(2 * uni(rng) - 1, 2 * uni(rng) - 1); };

  for (int trial = 0; trial < 40; ++trial) {
    SystemConfig c = preset("fig3-baseline");
    c.gamma32 = 0.5 + 1.5 * uni(rng);
    c.gamma_s = 0.02 * uni(rng);
    c.gamma_deph = 0.05 * uni(rng);
    c.delta31 = 4 * uni(rng) - 2;
    c.delta32 = 2 * uni(rng) - 1;
    c.omega32 = 6 * uni(rng);
    c.n_lambda3 = 160 * uni(rng);
    c.trap_ratio = 0.99 * uni(rng);
    c.lfc_on = (trial % 2) == 0;
    c.lfc_control_on = (trial % 4) < 2;
    c.trapping_on = (trial % 8) < 4;
    const auto r = derive_rates(c);

    DensityMatrix s;
    s.p11 = uni(rng);
    s.p22 = uni(rng);
    s.p33 = 1.0 - s.p11 - s.p22;  // generator never reads the trace, but keep it physical-ish
    s.r21 = 0.7 * cval();
    s.r31 = 0.7 * cval();
    s.r32 = 0.7 * cval();

    const cplx om31 = 0.5 * cval();
    const cplx om32 = c.omega32 + 0.2 * cval();

    const DensityMatrix fast = lindblad_rhs(s, om31, om32, c, r);
    const DensityMatrix ref = lindblad_rhs_reference(s, om31, om32, c, r);
    const double scale = std::max(1.0, std::max(state_norm(fast), state_norm(ref)));
    CHECK(state_diff(fast, ref) <= 1e-12 * scale);

    // tracelessness of the generator, independent of everything drawn above
    CHECK(std::abs(fast.p11 + fast.p22 + fast.p33) <= 1e-13 * scale);
  }
}

TEST_CASE("dark superposition is stationary at two-photon resonance") {
  SystemConfig c = preset("fig4");
  c.delta31 = 0;
  c.delta32 = 0;
  const auto r = derive_rates(c);

  const double om31 = 0.3;  // the dark state is exact at any probe strength
  const double om32 = c.omega32;
  const double n2 = om31 * om31 + om32 * om32;
  DensityMatrix d;
  d.p11 = om32 * om32 / n2;
  d.p22 = om31 * om31 / n2;
  d.p33 = 0;
  d.r21 = -om31 * om32 / n2;
  d.r31 = 0;
  d.r32 = 0;

  const DensityMatrix rhs = lindblad_rhs(d, om31, om32, c, r);
  CHECK(state_norm(rhs) <= 1e-14);
}

TEST_CASE("free radiative decay against the exponential") {
  SystemConfig c = preset("fig4");
  c.omega32 = 0;
  c.lfc_on = false;
  c.trapping_on = false;
  const auto r = derive_rates(c);
  const cplx zero3[3] = {0, 0, 0};

  auto decay_err = [&](double dt) {
    DensityMatrix s;
    s.p11 = 0;
    s.p33 = 1;
    const int n = (int)std::lround(2.0 / dt);
    for (int i = 0; i < n; ++i) step_rk4(s, zero3, zero3, dt, c, r);
    CHECK(std::abs(s.trace() - 1.0) <= 1e-12);
    return std::abs(s.p33 - std::exp(-2.0 * (c.gamma31 + c.gamma32)));
  };

  CHECK(decay_err(0.01) <= 1e-8);
  // classic fourth-order signature: halving dt cuts the error ~16x
  const double ratio = decay_err(0.02) / decay_err(0.01);
  CHECK(ratio >= 13.0);
  CHECK(ratio <= 19.0);
}

TEST_CASE("step size guard") {
  SystemConfig c = preset("fig3-baseline");
  const auto r = derive_rates(c);
  DensityMatrix s;
  const cplx f3[3] = {1e-3, 1e-3, 1e-3};
  const cplx g3[3] = {4.0, 4.0, 4.0};
  CHECK_THROWS_AS(step_rk4(s, f3, g3, 2.5 * r.dt_max, c, r), config_error);
}

TEST_CASE("steady state: incoherent exchange balances the ground doublet") {
  SystemConfig c = preset("fig4");
  c.omega32 = 0;
  c.gamma_s = 0.01;
  const auto r = derive_rates(c);
  SteadyStateInfo info;
  const DensityMatrix s = steady_state(0.0, c, r, &info);
  CHECK(s.p11 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(s.p22 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(s.p33) <= 1e-12);
  CHECK(std::abs(s.r21) <= 1e-12);
  CHECK(info.residual <= 1e-8);
}

TEST_CASE("steady state: driven baseline with strong radiation trapping") {
  // Pinned against an independent integration of the same model: the 0.99
  // reabsorption ratio leaves a millisecond-scale mode, and the populations
  // it feeds are what later suppresses the transmitted peak.
  SystemConfig c = preset("fig3-baseline");
  const auto r = derive_rates(c);
  SteadyStateInfo info;
  const DensityMatrix s = steady_state(cplx(1e-3, 0), c, r, &info);
  CHECK(std::abs(s.p33 - 2.9152348e-3) <= 2e-6);
  CHECK(std::abs(s.p22 - 3.2881174e-3) <= 2e-6);
  CHECK(s.trace() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.min_eigenvalue() >= -1e-10);
}

TEST_CASE("steady state: dark at two-photon resonance without ground decoherence") {
  SystemConfig c = preset("fig4");
  const auto r = derive_rates(c);
  const double om31 = 1e-3;
  const DensityMatrix s = steady_state(cplx(om31, 0), c, r, nullptr);
  CHECK(std::abs(s.p33) <= 1e-9);
  const double n2 = om31 * om31 + c.omega32 * c.omega32;
  CHECK(std::abs(s.r21 * n2 + om31 * c.omega32) <= 1e-9 * n2);
}

TEST_CASE("linearized steady state satisfies its own equations") {
  SystemConfig c = preset("fig2b");
  c.use_linearized_eom = true;
  c.delta31 = 0.4;
  c.delta32 = -0.1;
  const auto r = derive_rates(c);
  const cplx om31(1e-6, 0);
  const LinearizedState s = steady_state_linearized(om31, c, r);
  const LinearizedState d = linearized_rhs(s, om31, c, r);
  const double scale = std::max(std::abs(s.rho31), std::abs(s.rho21));
  CHECK(std::abs(d.rho31) <= 1e-12 * scale);
  CHECK(std::abs(d.rho21) <= 1e-12 * scale);
}

TEST_CASE("matrix round trip and eigenvalue floor") {
  DensityMatrix s;
  s.p11 = 0.6;
  s.p22 = 0.3;
  s.p33 = 0.1;
  s.r21 = cplx(0.1, -0.05);
  s.r31 = cplx(-0.02, 0.04);
  s.r32 = cplx(0.0, 0.03);
  const DensityMatrix back = DensityMatrix::from_matrix(s.matrix());
  CHECK(state_diff(s, back) <= 1e-14);
  CHECK(DensityMatrix::ground1().min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-14));

  Eigen::Matrix3cd bad = s.matrix();
  bad(0, 1) = cplx(0.2, 0.2);  // breaks hermiticity against bad(1,0)
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad), config_error);
  Eigen::Matrix3cd scaled = s.matrix() * 1.5;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(scaled), config_error);
}

}  // TEST_SUITE
