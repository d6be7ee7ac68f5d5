#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "eitsim/config.hpp"

namespace eitsim {

struct ScanAxis {
  double min = 0, max = 0;
  int steps = 0;
};

// Sweep of transmitted peak ratio over (gamma_s, trap_ratio). Cells always run
// the full master equation with trapping enabled; the cell grid is the scan's
// own (coarser than the presets: the per-cell observable is one peak ratio).
// n_z has a hard floor at the dense presets' depth: below ~160 slabs the
// explicit marcher amplifies the Autler-Townes absorption bands instead of
// damping them, and the cell diverges.
struct ScanRequest {
  SystemConfig base;
  ScanAxis gs{2e-6, 0.2, 24};      // gamma31 units, log-spaced
  ScanAxis trap{0.5, 0.999, 24};   // linear
  GridConfig cell_grid{180, 1121, 140.0};
  int workers = 1;
};

struct TransmissionMap {
  std::vector<double> gs;    // size n_gs
  std::vector<double> trap;  // size n_trap
  std::vector<double> ratio; // [i_gs * n_trap + j_trap]
  std::vector<std::uint8_t> flag;  // nonzero marks a failed cell
  int n_gs = 0, n_trap = 0;

  double at(int i, int j) const { return ratio[(size_t)i * n_trap + j]; }
  bool ok(int i, int j) const { return flag[(size_t)i * n_trap + j] == 0; }
};

// Runs every cell through propagate(); failures are flagged, never filled in.
// Aborts (solver_error) only when more than 10% of cells fail.
TransmissionMap run_scan(const ScanRequest& req);

// Marching-squares level lines. points carries (gamma_s, trap_ratio) vertices;
// points_index the same vertices in fractional grid-index coordinates, which
// is the natural metric on a log-spaced axis. Saddle cells are split by the
// cell-average rule. Cells with a flagged corner produce no segments.
struct ContourLine {
  double level = 0;
  std::vector<std::array<double, 2>> points;
  std::vector<std::array<double, 2>> points_index;
};

std::vector<ContourLine> extract_contours(const TransmissionMap& map,
                                          const std::vector<double>& levels);

}  // namespace eitsim
