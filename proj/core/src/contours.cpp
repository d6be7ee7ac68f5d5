#include <cmath>
#include <map>

#include "eitsim/scan.hpp"

namespace eitsim {

namespace {

using Pt = std::array<double, 2>;  // fractional (i_gs, j_trap)

struct Seg {
  Pt a, b;
  bool used = false;
};

long long key_of(const Pt& p) {
  // quantized endpoint key for chaining; indices are small so 32 bits each side
  const long long qa = std::llround(p[0] * 1048576.0);
  const long long qb = std::llround(p[1] * 1048576.0);
  return (qa << 32) | (qb & 0xffffffffLL);
}

}  // namespace

std::vector<ContourLine> extract_contours(const TransmissionMap& map,
                                          const std::vector<double>& levels) {
  std::vector<ContourLine> out;
  const int ni = map.n_gs, nj = map.n_trap;
  const double lgs0 = std::log(map.gs.front());
  const double lgs1 = std::log(map.gs.back());

  auto to_phys = [&](const Pt& p) -> Pt {
    // gs axis is log-spaced, so linear index interpolation is log
    // interpolation in the physical value
    const double g = std::exp(lgs0 + (lgs1 - lgs0) * p[0] / (ni - 1));
    const double t = map.trap.front() +
                     (map.trap.back() - map.trap.front()) * p[1] / (nj - 1);
    return {g, t};
  };

  for (double level : levels) {
    std::vector<Seg> segs;
    for (int i = 0; i + 1 < ni; ++i) {
      for (int j = 0; j + 1 < nj; ++j) {
        if (!map.ok(i, j) || !map.ok(i + 1, j) || !map.ok(i, j + 1) ||
            !map.ok(i + 1, j + 1))
          continue;
        const double v00 = map.at(i, j), v10 = map.at(i + 1, j);
        const double v01 = map.at(i, j + 1), v11 = map.at(i + 1, j + 1);
        int mask = 0;
        if (v00 >= level) mask |= 1;
        if (v10 >= level) mask |= 2;
        if (v11 >= level) mask |= 4;
        if (v01 >= level) mask |= 8;
        if (mask == 0 || mask == 15) continue;

        auto edge = [&](double va, double vb, double ax, double ay, double bx,
                        double by) -> Pt {
          const double t = (level - va) / (vb - va);
          return {ax + t * (bx - ax), ay + t * (by - ay)};
        };
        const Pt bottom = edge(v00, v10, i, j, i + 1, j);
        const Pt right = edge(v10, v11, i + 1, j, i + 1, j + 1);
        const Pt top = edge(v01, v11, i, j + 1, i + 1, j + 1);
        const Pt left = edge(v00, v01, i, j, i, j + 1);

        auto add = [&](const Pt& a, const Pt& b) { segs.push_back({a, b, false}); };
        switch (mask) {
          case 1: case 14: add(left, bottom); break;
          case 2: case 13: add(bottom, right); break;
          case 3: case 12: add(left, right); break;
          case 4: case 11: add(right, top); break;
          case 6: case 9: add(bottom, top); break;
          case 7: case 8: add(left, top); break;
          case 5: case 10: {
            // saddle: decide connectivity by the cell average
            const double avg = 0.25 * (v00 + v10 + v01 + v11);
            const bool high_center = avg >= level;
            if ((mask == 5) == high_center) {
              add(left, bottom);
              add(right, top);
            } else {
              add(left, top);
              add(bottom, right);
            }
            break;
          }
          default: break;
        }
      }
    }

    // chain segments into polylines by shared endpoints
    std::multimap<long long, size_t> by_end;
    for (size_t s = 0; s < segs.size(); ++s) {
      by_end.insert({key_of(segs[s].a), s});
      by_end.insert({key_of(segs[s].b), s});
    }
    auto next_unused = [&](const Pt& p, size_t self) -> size_t {
      auto [lo, hi] = by_end.equal_range(key_of(p));
      for (auto it = lo; it != hi; ++it)
        if (it->second != self && !segs[it->second].used) return it->second;
      return segs.size();
    };

    for (size_t s0 = 0; s0 < segs.size(); ++s0) {
      if (segs[s0].used) continue;
      segs[s0].used = true;
      std::vector<Pt> chain{segs[s0].a, segs[s0].b};
      // grow forward from the tail, then backward from the head
      for (int dir = 0; dir < 2; ++dir) {
        for (;;) {
          const Pt& tip = dir == 0 ? chain.back() : chain.front();
          const size_t s = next_unused(tip, (size_t)-1);
          if (s == segs.size()) break;
          segs[s].used = true;
          const bool from_a = key_of(segs[s].a) == key_of(tip);
          const Pt& far = from_a ? segs[s].b : segs[s].a;
          if (dir == 0) chain.push_back(far);
          else chain.insert(chain.begin(), far);
        }
      }
      ContourLine line;
      line.level = level;
      line.points_index = chain;
      for (const Pt& p : chain) line.points.push_back(to_phys(p));
      out.push_back(std::move(line));
    }
  }
  return out;
}

}  // namespace eitsim
