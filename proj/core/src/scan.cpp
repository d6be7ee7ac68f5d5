#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "eitsim/propagation.hpp"
#include "eitsim/scan.hpp"

namespace eitsim {

TransmissionMap run_scan(const ScanRequest& req) {
  if (req.gs.steps < 2 || req.trap.steps < 2)
    throw config_error("scan axes need at least 2 steps each");
  if (!(req.gs.min > 0) || !(req.gs.max > req.gs.min))
    throw config_error("gamma_s axis must satisfy 0 < min < max");
  if (!(req.trap.min >= 0) || !(req.trap.max > req.trap.min) ||
      !(req.trap.max < 1))
    throw config_error("trap axis must satisfy 0 <= min < max < 1");

  TransmissionMap map;
  map.n_gs = req.gs.steps;
  map.n_trap = req.trap.steps;
  map.gs.resize(map.n_gs);
  map.trap.resize(map.n_trap);
  const double lr = std::log(req.gs.max / req.gs.min);
  for (int i = 0; i < map.n_gs; ++i)
    map.gs[i] = req.gs.min * std::exp(lr * i / (map.n_gs - 1));
  for (int j = 0; j < map.n_trap; ++j)
    map.trap[j] = req.trap.min +
                  (req.trap.max - req.trap.min) * j / (map.n_trap - 1);

  const size_t n_cells = (size_t)map.n_gs * map.n_trap;
  map.ratio.assign(n_cells, 0.0);
  map.flag.assign(n_cells, 0);

  SystemConfig cell_base = req.base;
  cell_base.use_linearized_eom = false;  // the sweep is a full-model statement
  cell_base.trapping_on = true;
  cell_base.grid = req.cell_grid;
  cell_base.store_every = 0;
  require_valid(cell_base);

  auto run_cell = [&](size_t idx) {
    SystemConfig c = cell_base;
    c.gamma_s = map.gs[idx / map.n_trap];
    c.trap_ratio = map.trap[idx % map.n_trap];
    try {
      const FieldRecord rec = propagate(c);
      const PulseMetrics pm = measure_pulse(rec, (int)rec.z.size() - 1, c);
      if (pm.peak_at_boundary || !(pm.peak_ratio >= 0) ||
          pm.peak_ratio > 1 + 1e-3) {
        map.flag[idx] = 1;
      } else {
        map.ratio[idx] = pm.peak_ratio;
      }
    } catch (const std::exception&) {
      map.flag[idx] = 1;
    }
  };

  const int workers = std::max(1, req.workers);
  if (workers == 1) {
    for (size_t idx = 0; idx < n_cells; ++idx) run_cell(idx);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t idx = next.fetch_add(1); idx < n_cells;
             idx = next.fetch_add(1))
          run_cell(idx);
      });
    for (auto& t : pool) t.join();
  }

  size_t failed = 0;
  for (auto f : map.flag) failed += f != 0;
  if (failed * 10 > n_cells) {
    std::ostringstream msg;
    msg << "scan aborted: " << failed << " of " << n_cells << " cells failed";
    throw solver_error(msg.str());
  }
  return map;
}

}  // namespace eitsim
