#pragma once

#include <vector>

#include "eitsim/config.hpp"
#include "eitsim/types.hpp"

namespace eitsim {

// Probe envelope on the retarded-frame grid. z is normalized to [0,1]; the
// physical depth lives in k0z. Only the slabs selected by store_every are
// kept (both faces always are).
struct FieldRecord {
  std::vector<double> z;
  std::vector<double> tau;
  std::vector<std::vector<cplx>> omega31;  // [stored slab][tau sample]
  std::vector<std::vector<cplx>> omega32;  // nonempty iff propagate_control
  std::vector<std::vector<cplx>> rho31;    // atomic coherence on the same slabs
  int n_z_total = 0;
};

// Source strength over the whole medium: g * z_total = 1.5 * L * gamma31 * k0z.
// The value is forced by consistency between the field equation and the
// closed-form susceptibility; the monochromatic-gain test asserts it.
double coupling_constant(const SystemConfig& cfg);

// March d(omega31)/dz = i * g * rho31 across the medium: per z-slab the atomic
// line is integrated along tau (RK4 substeps against the interpolated field),
// then the field advances by an explicit predictor and a trapezoidal corrector
// with the atoms re-integrated at the predicted field.
FieldRecord propagate(const SystemConfig& cfg);

// Same, driving with a caller-supplied input line on tau_axis(cfg.grid)
// instead of the config's Gaussian.
FieldRecord propagate(const SystemConfig& cfg, const std::vector<cplx>& input);

struct PulseMetrics {
  double peak_ratio = 0;      // |omega31| at the interpolated peak over probe_amp
  double peak_tau = 0;        // quadratic interpolation through the maximum
  double width = 0;           // Gaussian sigma from a log-quadratic fit
  double width2 = 0;
  double phase_at_peak = 0;   // unwrapped envelope phase at peak_tau
  double chirp_slope = 0;     // line fit of inst_freq over |tau - peak_tau| <= sigma
  double chirp_intercept = 0;
  double chirp_residual = 0;  // rms of the line fit
  std::vector<double> phase;      // unwrapped, anchored at the peak sample
  std::vector<double> inst_freq;  // carrier shift -dphi/dtau, centered differences
  bool peak_at_boundary = false;
  bool degenerate_fit = false;
};

// Metrics for one stored slab (index into record.z). The phase is unwrapped
// outward from the pulse peak; anchoring at a window edge would walk through
// tail noise and pick up arbitrary 2pi windings.
PulseMetrics measure_pulse(const FieldRecord& rec, int slab,
                           const SystemConfig& cfg);

}  // namespace eitsim
