#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "eitsim/bloch.hpp"
#include "eitsim/config.hpp"
#include "eitsim/propagation.hpp"
#include "eitsim/susceptibility.hpp"

using namespace eitsim;

namespace {

DensityMatrix probe_state() {
  DensityMatrix s;
  s.p11 = 0.92;
  s.p22 = 0.05;
  s.p33 = 0.03;
  s.r21 = cplx(-0.02, 0.01);
  s.r31 = cplx(0.003, -0.004);
  s.r32 = cplx(-0.001, 0.002);
  return s;
}

}  // namespace

// The RHS pair dominates every propagation run; the reference transcription
// exists only for tests but its cost ratio is worth tracking.
static void BM_RhsFull(benchmark::State& state) {
  const SystemConfig c = preset("fig3-baseline");
  const DerivedRates r = derive_rates(c);
  const DensityMatrix s = probe_state();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lindblad_rhs(s, cplx(1e-3, 0), cplx(4, 0), c, r));
  }
}
BENCHMARK(BM_RhsFull);

static void BM_RhsReference(benchmark::State& state) {
  const SystemConfig c = preset("fig3-baseline");
  const DerivedRates r = derive_rates(c);
  const DensityMatrix s = probe_state();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lindblad_rhs_reference(s, cplx(1e-3, 0), cplx(4, 0), c, r));
  }
}
BENCHMARK(BM_RhsReference);

static void BM_Rk4StepFull(benchmark::State& state) {
  const SystemConfig c = preset("fig3-baseline");
  const DerivedRates r = derive_rates(c);
  DensityMatrix s = probe_state();
  const cplx f[3] = {cplx(1e-3, 0), cplx(1e-3, 0), cplx(1e-3, 0)};
  const cplx g[3] = {cplx(4, 0), cplx(4, 0), cplx(4, 0)};
  for (auto _ : state) {
    step_rk4(s, f, g, r.dt_max, c, r);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Rk4StepFull);

static void BM_Rk4StepLinearized(benchmark::State& state) {
  SystemConfig c = preset("fig3-baseline");
  c.use_linearized_eom = true;
  const DerivedRates r = derive_rates(c);
  LinearizedState s;
  const cplx f[3] = {cplx(1e-3, 0), cplx(1e-3, 0), cplx(1e-3, 0)};
  for (auto _ : state) {
    step_rk4(s, f, cplx(4, 0), r.dt_max, c, r);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Rk4StepLinearized);

static void BM_Chi(benchmark::State& state) {
  const SystemConfig c = preset("fig2b");
  double d = -8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi(c, d));
    d += 1e-3;
    if (d > 8) d = -8;
  }
}
BENCHMARK(BM_Chi);

static void BM_SteadyStateLinearized(benchmark::State& state) {
  SystemConfig c = preset("fig2b");
  c.use_linearized_eom = true;
  const DerivedRates r = derive_rates(c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(steady_state_linearized(cplx(1e-6, 0), c, r));
  }
}
BENCHMARK(BM_SteadyStateLinearized);

// One thin-medium march: the atom line integration at realistic tau
// resolution, small enough to iterate.
static void BM_PropagateThin(benchmark::State& state) {
  SystemConfig c = preset("fig4");
  c.n_lambda3 = 1.0;
  c.k0z = 5.0;
  c.grid = GridConfig{5, 513, 64.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(c));
  }
}
BENCHMARK(BM_PropagateThin);

BENCHMARK_MAIN();
