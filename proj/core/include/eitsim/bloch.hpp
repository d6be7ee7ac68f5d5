#pragma once

#include <Eigen/Dense>

#include "eitsim/config.hpp"
#include "eitsim/types.hpp"

namespace eitsim {

// Hermitian unit-trace 3x3 state stored as its independent components:
// populations and lower-triangle coherences. Hermiticity is structural in
// this representation; trace is preserved by the generator.
struct DensityMatrix {
  double p11 = 1, p22 = 0, p33 = 0;
  cplx r21{}, r31{}, r32{};

  static DensityMatrix ground1() { return {}; }
  static DensityMatrix mixed12() { return {0.5, 0.5, 0, {}, {}, {}}; }
  static DensityMatrix from_matrix(const Eigen::Matrix3cd& m);

  Eigen::Matrix3cd matrix() const;
  double trace() const { return p11 + p22 + p33; }
  double min_eigenvalue() const;
  cplx rho31() const { return r31; }
  cplx rho21() const { return r21; }
  cplx rho32() const { return r32; }
};

struct LocalFields {
  cplx omega31_ext{}, omega32_ext{};
  cplx omega31_mic{}, omega32_mic{};
};

// Lorentz-Lorenz substitution: the field an atom sees gains the mean dipole
// field of its neighbors, L*gamma3j*rho3j per transition.
LocalFields local_fields(cplx omega31_ext, cplx omega32_ext,
                         const DensityMatrix& rho, const SystemConfig& cfg,
                         const DerivedRates& rates);

struct PumpRates {
  double R31 = 0, R32 = 0;
};

// Reabsorption of spontaneous photons: incoherent pumping proportional to the
// instantaneous excited population.
PumpRates trapping_rates(const DensityMatrix& rho, const SystemConfig& cfg);

namespace detail {

// Constants of one integration context, folded once so the right-hand side
// stays a handful of complex multiplies.
struct ModelParams {
  double g31 = 0, g32 = 0, gs = 0;
  double d31 = 0, d32 = 0, d = 0;
  double Lp = 0, Lc = 0;       // L*gamma3j when the LFC applies, else 0
  double trapR = 0;            // trap_ratio when trapping is on, else 0
  double R31_extra = 0, R32_extra = 0;  // frozen pump add-ons for linear solves
  double c31 = 0, c21 = 0, c32 = 0;     // field-independent coherence dampings
  static ModelParams make(const SystemConfig& cfg, const DerivedRates& rates);
};

DensityMatrix rhs_full(const DensityMatrix& s, cplx om31_ext, cplx om32_ext,
                       const ModelParams& p);

}  // namespace detail

// Full master equation right-hand side at external envelopes (the microscopic
// fields are formed inside from the current coherences). Traceless,
// hermiticity-preserving.
DensityMatrix lindblad_rhs(const DensityMatrix& rho, cplx omega31_ext,
                           cplx omega32_ext, const SystemConfig& cfg,
                           const DerivedRates& rates);

// Direct matrix transcription (commutator plus the five dissipators built as
// 3x3 matrices). Slower; exists to pin down the optimized component form.
DensityMatrix lindblad_rhs_reference(const DensityMatrix& rho, cplx omega31_ext,
                                     cplx omega32_ext, const SystemConfig& cfg,
                                     const DerivedRates& rates);

// Weak-probe pair (rho31, rho21): everything else stays at the ground state.
struct LinearizedState {
  cplx rho31{}, rho21{};
};

LinearizedState linearized_rhs(const LinearizedState& s, cplx omega31_ext,
                               const SystemConfig& cfg, const DerivedRates& rates);

// Classical RK4 step from t to t+dt. The probe envelope is passed presampled
// at the three stage times {t, t+dt/2, t+dt}; same for the control when it
// varies (pass three equal values otherwise). Trapping pumps are re-formed at
// every stage from that stage's rho33. dt must respect rates.dt_max.
void step_rk4(DensityMatrix& s, const cplx omega31[3], const cplx omega32[3],
              double dt, const SystemConfig& cfg, const DerivedRates& rates);
void step_rk4(LinearizedState& s, const cplx omega31[3], cplx omega32, double dt,
              const SystemConfig& cfg, const DerivedRates& rates);

struct SteadyStateInfo {
  int iterations = 0;
  bool used_fallback = false;
  double residual = 0;
};

// Steady state under constant envelopes. Full path: linear solve of the
// Lindblad generator at frozen pump rates and frozen microscopic fields,
// then a damped fixed-point loop over those; long-time integration picks up
// the slow radiation-trapping mode when the loop stalls.
DensityMatrix steady_state(cplx omega31, const SystemConfig& cfg,
                           const DerivedRates& rates,
                           SteadyStateInfo* info = nullptr);

LinearizedState steady_state_linearized(cplx omega31, const SystemConfig& cfg,
                                        const DerivedRates& rates);

}  // namespace eitsim
