#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "eitsim/config.hpp"
#include "eitsim/scan.hpp"

using namespace eitsim;

namespace {

TransmissionMap synth_map(int n_gs, int n_trap) {
  TransmissionMap m;
  m.n_gs = n_gs;
  m.n_trap = n_trap;
  m.gs.resize(n_gs);
  m.trap.resize(n_trap);
  for (int i = 0; i < n_gs; ++i)
    m.gs[i] = 1e-4 * std::pow(100.0, i / double(n_gs - 1));
  for (int j = 0; j < n_trap; ++j)
    m.trap[j] = 0.5 + 0.4 * j / double(n_trap - 1);
  m.ratio.assign((size_t)n_gs * n_trap, 0.0);
  m.flag.assign((size_t)n_gs * n_trap, 0);
  return m;
}

}  // namespace

TEST_SUITE("scan") {

TEST_CASE("axis validation") {
  ScanRequest req;
  req.base = preset("fig3-baseline");
  req.gs = {1e-5, 1e-3, 1};  // a single step is not an axis
  CHECK_THROWS_AS(run_scan(req), config_error);
  req.gs = {0.0, 1e-3, 4};  // log axis cannot start at zero
  CHECK_THROWS_AS(run_scan(req), config_error);
  req.gs = {1e-3, 1e-5, 4};  // inverted
  CHECK_THROWS_AS(run_scan(req), config_error);
  req.gs = {1e-5, 1e-3, 4};
  req.trap = {0.5, 1.0, 4};  // reabsorption ratio 1 never drains
  CHECK_THROWS_AS(run_scan(req), config_error);
}

TEST_CASE("small scan: deterministic across worker counts, physical trends") {
  // Shallower medium than the presets so a 32-slab cell is both stable and
  // quick; the gs axis spans enough decades that the Raman-loss trend is
  // well clear of discretization dust.
  ScanRequest req;
  req.base = preset("fig3-baseline");
  req.base.k0z = 50.0;
  req.gs = {1e-5, 1e-2, 3};
  req.trap = {0.6, 0.9, 3};
  req.cell_grid = GridConfig{32, 641, 80.0};
  req.workers = 1;
  const TransmissionMap a = run_scan(req);
  req.workers = 3;
  const TransmissionMap b = run_scan(req);

  REQUIRE(a.ratio.size() == 9);
  CHECK(a.ratio == b.ratio);  // bitwise: the partition must not touch the numbers
  CHECK(a.flag == b.flag);

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(a.ok(i, j));
      CHECK(a.at(i, j) > 0.0);
      CHECK(a.at(i, j) <= 1.001);
    }

  // more ground-state decoherence, less transmission
  for (int j = 0; j < 3; ++j) CHECK(a.at(0, j) - a.at(2, j) >= 0.01);
  // more reabsorption, never more transmission (within numerical dust)
  for (int i = 0; i < 3; ++i) CHECK(a.at(i, 0) >= a.at(i, 2) - 1e-3);

  CHECK(a.gs[0] == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK(a.gs[1] == doctest::Approx(3.1622776602e-4).epsilon(1e-9));  // log midpoint
  CHECK(a.trap[1] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("a scan whose cells all blow the slab guard aborts") {
  ScanRequest req;
  req.base = preset("fig3-baseline");
  req.base.probe_amp = 5.0;  // saturates the medium; one slab cannot hold it
  req.gs = {1e-5, 1e-4, 2};
  req.trap = {0.5, 0.9, 2};
  req.cell_grid = GridConfig{2, 1121, 140.0};
  req.workers = 2;
  CHECK_THROWS_AS(run_scan(req), solver_error);
}

TEST_CASE("contours: flat field has none") {
  TransmissionMap m = synth_map(5, 5);
  for (double& v : m.ratio) v = 0.8;
  CHECK(extract_contours(m, {0.5}).empty());
}

TEST_CASE("contours: linear ramp gives one straight line at the exact index") {
  TransmissionMap m = synth_map(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m.ratio[(size_t)i * 5 + j] = 1.0 - i / 4.0;

  const auto lines = extract_contours(m, {0.6});
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].level == 0.6);
  REQUIRE(lines[0].points.size() == 5);
  REQUIRE(lines[0].points_index.size() == 5);
  const double want_gs = 1e-4 * std::pow(100.0, 1.6 / 4.0);
  for (size_t k = 0; k < lines[0].points.size(); ++k) {
    CHECK(lines[0].points_index[k][0] == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(lines[0].points[k][0] == doctest::Approx(want_gs).epsilon(1e-9));
  }
  // the polyline spans the whole trap axis
  double lo = 1, hi = 0;
  for (const auto& pt : lines[0].points) {
    lo = std::min(lo, pt[1]);
    hi = std::max(hi, pt[1]);
  }
  CHECK(lo == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hi == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("contours: a flagged corner breaks the line, never bridges it") {
  TransmissionMap m = synth_map(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m.ratio[(size_t)i * 5 + j] = 1.0 - i / 4.0;
  m.flag[2 * 5 + 2] = 1;

  const auto lines = extract_contours(m, {0.6});
  REQUIRE(lines.size() == 2);  // split where the two adjacent cells went dark
  size_t total = 0;
  for (const auto& l : lines) {
    total += l.points.size();
    for (const auto& pt : l.points_index) {
      CHECK(pt[0] == doctest::Approx(1.6).epsilon(1e-12));
      CHECK(std::abs(pt[1] - 2.0) >= 0.99);  // nothing inside the dead cells
    }
  }
  CHECK(total == 4);
}

TEST_CASE("contours: nested levels of a radial hill stay nested") {
  TransmissionMap m = synth_map(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      const double d = std::sqrt((i - 4.0) * (i - 4.0) + (j - 4.0) * (j - 4.0));
      m.ratio[(size_t)i * 9 + j] = 1.0 - d / 6.0;
    }
  const auto lines = extract_contours(m, {0.7, 0.5});
  double r_hi_max = 0, r_lo_min = 1e9;
  bool saw_hi = false, saw_lo = false;
  for (const auto& l : lines)
    for (const auto& pt : l.points_index) {
      const double r = std::hypot(pt[0] - 4.0, pt[1] - 4.0);
      if (l.level == 0.7) {
        r_hi_max = std::max(r_hi_max, r);
        saw_hi = true;
      } else {
        r_lo_min = std::min(r_lo_min, r);
        saw_lo = true;
      }
    }
  REQUIRE(saw_hi);
  REQUIRE(saw_lo);
  CHECK(r_hi_max < r_lo_min);
  CHECK(r_hi_max == doctest::Approx(1.8).epsilon(0.15));
  CHECK(r_lo_min == doctest::Approx(3.0).epsilon(0.15));
}

}  // TEST_SUITE
