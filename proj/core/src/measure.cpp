#include <algorithm>
#include <cmath>

#include "eitsim/propagation.hpp"

namespace eitsim {

namespace {

// least-squares quadratic c0 + c1 u + c2 u^2
struct QuadFit {
  double c0 = 0, c1 = 0, c2 = 0;
  bool ok = false;
};

QuadFit fit_quadratic(const std::vector<double>& u, const std::vector<double>& y) {
  QuadFit f;
  const size_t n = u.size();
  if (n < 3) return f;
  double s1 = n, su = 0, su2 = 0, su3 = 0, su4 = 0, sy = 0, suy = 0, su2y = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = u[i], x2 = x * x;
    su += x; su2 += x2; su3 += x * x2; su4 += x2 * x2;
    sy += y[i]; suy += x * y[i]; su2y += x2 * y[i];
  }
  // normal equations, 3x3 Cramer
  const double a[3][3] = {{s1, su, su2}, {su, su2, su3}, {su2, su3, su4}};
  const double b[3] = {sy, suy, su2y};
  auto det3 = [](const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double d = det3(a);
  if (std::abs(d) < 1e-300) return f;
  double m0[3][3], m1[3][3], m2[3][3];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      m0[r][c] = c == 0 ? b[r] : a[r][c];
      m1[r][c] = c == 1 ? b[r] : a[r][c];
      m2[r][c] = c == 2 ? b[r] : a[r][c];
    }
  f.c0 = det3(m0) / d;
  f.c1 = det3(m1) / d;
  f.c2 = det3(m2) / d;
  f.ok = true;
  return f;
}

}  // namespace

PulseMetrics measure_pulse(const FieldRecord& rec, int slab,
                           const SystemConfig& cfg) {
  if (slab < 0 || slab >= (int)rec.omega31.size())
    throw config_error("measure_pulse: slab index out of range");
  const std::vector<cplx>& f = rec.omega31[slab];
  const std::vector<double>& tau = rec.tau;
  const int n = (int)f.size();
  const double dtau = tau[1] - tau[0];
  PulseMetrics out;

  int pk = 0;
  double pk_abs = 0;
  for (int i = 0; i < n; ++i) {
    const double m = std::abs(f[i]);
    if (m > pk_abs) { pk_abs = m; pk = i; }
  }
  const double margin = 3 * cfg.probe_width;
  if (pk == 0 || pk == n - 1 || tau[pk] - tau.front() < margin ||
      tau.back() - tau[pk] < margin)
    out.peak_at_boundary = true;

  // local parabola through the three samples around the maximum
  double vertex_shift = 0, vertex_val = pk_abs;
  if (pk > 0 && pk < n - 1) {
    const double ym = std::abs(f[pk - 1]), y0 = pk_abs, yp = std::abs(f[pk + 1]);
    const double denom = ym - 2 * y0 + yp;
    if (denom < -1e-300) {
      vertex_shift = 0.5 * dtau * (ym - yp) / denom;
      vertex_val = y0 - 0.125 * (ym - yp) * (ym - yp) / denom;
    }
  }
  out.peak_tau = tau[pk] + vertex_shift;
  out.peak_ratio = cfg.probe_amp > 0 ? vertex_val / cfg.probe_amp : vertex_val;

  // Gaussian width via log-quadratic fit over the top 1/e of the envelope;
  // the support picks itself so broadening is handled automatically
  {
    std::vector<double> u, y;
    const double floor = vertex_val * std::exp(-1.0);
    for (int i = 0; i < n; ++i)
      if (std::abs(f[i]) >= floor) {
        u.push_back(tau[i] - out.peak_tau);
        y.push_back(std::log(std::abs(f[i])));
      }
    const QuadFit q = fit_quadratic(u, y);
    if (q.ok && q.c2 < 0) {
      out.width2 = -0.5 / q.c2;
      out.width = std::sqrt(out.width2);
    } else {
      out.degenerate_fit = true;
    }
  }

  // unwrap outward from the peak: the tail carries no usable phase, so an
  // edge-anchored unwrap would seed the whole curve with noise windings
  out.phase.assign(n, 0.0);
  out.phase[pk] = std::arg(f[pk]);
  const double two_pi = 2 * pi;
  for (int i = pk + 1; i < n; ++i) {
    const double raw = std::arg(f[i]);
    out.phase[i] = raw + two_pi * std::round((out.phase[i - 1] - raw) / two_pi);
  }
  for (int i = pk - 1; i >= 0; --i) {
    const double raw = std::arg(f[i]);
    out.phase[i] = raw + two_pi * std::round((out.phase[i + 1] - raw) / two_pi);
  }

  // phase at the interpolated peak via the three neighbors
  if (pk > 0 && pk < n - 1) {
    const double t = vertex_shift / dtau;
    out.phase_at_peak =
        out.phase[pk] + 0.5 * t * (out.phase[pk + 1] - out.phase[pk - 1]) +
        0.5 * t * t * (out.phase[pk + 1] - 2 * out.phase[pk] + out.phase[pk - 1]);
  } else {
    out.phase_at_peak = out.phase[pk];
  }

  out.inst_freq.assign(n, 0.0);
  for (int i = 1; i + 1 < n; ++i)
    out.inst_freq[i] = -(out.phase[i + 1] - out.phase[i - 1]) / (2 * dtau);

  // chirp: line fit of the frequency shift across the peak, one input width
  // to each side
  {
    std::vector<double> u, w;
    for (int i = 1; i + 1 < n; ++i) {
      const double d = tau[i] - out.peak_tau;
      if (std::abs(d) <= cfg.probe_width) {
        u.push_back(d);
        w.push_back(out.inst_freq[i]);
      }
    }
    const size_t m = u.size();
    if (m >= 2) {
      double su = 0, sw = 0, suu = 0, suw = 0;
      for (size_t i = 0; i < m; ++i) {
        su += u[i]; sw += w[i]; suu += u[i] * u[i]; suw += u[i] * w[i];
      }
      const double det = m * suu - su * su;
      if (std::abs(det) > 1e-300) {
        out.chirp_slope = (m * suw - su * sw) / det;
        out.chirp_intercept = (sw * suu - su * suw) / det;
        double rss = 0;
        for (size_t i = 0; i < m; ++i) {
          const double r = w[i] - (out.chirp_intercept + out.chirp_slope * u[i]);
          rss += r * r;
        }
        out.chirp_residual = std::sqrt(rss / m);
      } else {
        out.degenerate_fit = true;
      }
    }
  }
  // flat phase across the pulse: report a clean zero instead of fit noise
  double span = 0;
  for (int i = 1; i + 1 < n; ++i)
    if (std::abs(f[i]) > 0.1 * vertex_val)
      span = std::max(span, std::abs(out.phase[i] - out.phase[pk]));
  if (span < 1e-12) {
    out.chirp_slope = 0;
    out.degenerate_fit = true;
  }
  return out;
}

}  // namespace eitsim
