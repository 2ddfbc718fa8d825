#pragma once
// Flood-fill survivor oracle on a 0.1 mm raster of the sheet. Cells touched
// by a cut are walls; a coil survives when its footprint cells and its feed
// path cells are wall-free and its centre is reachable from the root through
// non-wall cells. Works in doubles on its own segment walk; the library is
// used only for the tree layout and the footprint boxes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "wpt/cut_engine.hpp"

namespace oracle {

struct Raster {
  double origin = 0.0;  // um, lower-left corner
  double cell = 100.0;  // um
  int n = 0;
  std::vector<std::uint8_t> wall;

  // Cells whose closed extent meets [lo, hi] along one axis.
  std::pair<int, int> range(double lo, double hi) const {
    const double a = (lo - origin) / cell, b = (hi - origin) / cell;
    int i0 = static_cast<int>(std::floor(a));
    if (a == std::floor(a)) --i0;
    int i1 = static_cast<int>(std::floor(b));
    return {std::max(i0, 0), std::min(i1, n - 1)};
  }

  template <class F>
  void walk(double ax, double ay, double bx, double by, F&& f) const {
    if (ax > bx) {
      std::swap(ax, bx);
      std::swap(ay, by);
    }
    const auto [c0, c1] = range(ax, bx);
    for (int i = c0; i <= c1; ++i) {
      double xl = std::max(ax, origin + i * cell), xr = std::min(bx, origin + (i + 1) * cell);
      if (xl > xr) continue;
      double yl, yr;
      if (bx == ax) {
        yl = std::min(ay, by);
        yr = std::max(ay, by);
      } else {
        const double s = (by - ay) / (bx - ax);
        yl = ay + s * (xl - ax);
        yr = ay + s * (xr - ax);
        if (yl > yr) std::swap(yl, yr);
      }
      const auto [r0, r1] = range(yl, yr);
      for (int j = r0; j <= r1; ++j) f(i, j);
    }
  }

  std::uint8_t& at(int i, int j) { return wall[static_cast<std::size_t>(j) * n + i]; }
  std::uint8_t at(int i, int j) const { return wall[static_cast<std::size_t>(j) * n + i]; }
};

inline std::set<wpt::CoilIndex> raster_survivors(const wpt::SheetSpec& spec, const wpt::RoutingTree& tree,
                                                 const wpt::CutScenario& sc) {
  Raster r;
  const double side = static_cast<double>(spec.side().um());
  r.origin = -side / 2.0;
  r.n = static_cast<int>(std::llround(side / r.cell));
  r.wall.assign(static_cast<std::size_t>(r.n) * r.n, 0);

  for (const auto& cut : sc.cuts) {
    const auto& p = cut.points;
    const std::size_t m = cut.closed ? p.size() : p.size() - 1;
    for (std::size_t k = 0; k < m; ++k) {
      const auto& a = p[k];
      const auto& b = p[(k + 1) % p.size()];
      r.walk(double(a.x), double(a.y), double(b.x), double(b.y), [&](int i, int j) { r.at(i, j) = 1; });
    }
  }

  // The root is a lattice vertex; all four cells around it must be open.
  const auto root_cells = r.range(0.0, 0.0);
  for (int i = root_cells.first; i <= root_cells.second; ++i)
    for (int j = root_cells.first; j <= root_cells.second; ++j)
      if (r.at(i, j)) return {};

  std::vector<std::uint8_t> seen(r.wall.size(), 0);
  std::vector<int> stack;
  for (int i = root_cells.first; i <= root_cells.second; ++i)
    for (int j = root_cells.first; j <= root_cells.second; ++j) {
      seen[static_cast<std::size_t>(j) * r.n + i] = 1;
      stack.push_back(j * r.n + i);
    }
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    const int i = c % r.n, j = c / r.n;
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      const int a = i + di[d], b = j + dj[d];
      if (a < 0 || b < 0 || a >= r.n || b >= r.n) continue;
      const std::size_t idx = static_cast<std::size_t>(b) * r.n + a;
      if (seen[idx] || r.wall[idx]) continue;
      seen[idx] = 1;
      stack.push_back(b * r.n + a);
    }
  }

  std::set<wpt::CoilIndex> out;
  for (const auto& [coil, leaf] : tree.leaves) {
    (void)leaf;
    const auto [lo, hi] = wpt::coil_footprint(spec, coil);
    bool ok = true;
    const auto xr = r.range(double(lo.x), double(hi.x)), yr = r.range(double(lo.y), double(hi.y));
    for (int j = yr.first; ok && j <= yr.second; ++j)
      for (int i = xr.first; ok && i <= xr.second; ++i)
        if (r.at(i, j)) ok = false;
    for (const auto& s : wpt::path_to_leaf(tree, coil)) {
      if (!ok) break;
      const auto& a = tree.nodes[s.node_a].position;
      const auto& b = tree.nodes[s.node_b].position;
      r.walk(double(a.x), double(a.y), double(b.x), double(b.y), [&](int i, int j) {
        if (r.at(i, j)) ok = false;
      });
    }
    if (!ok) continue;
    const auto c = wpt::coil_center(spec, coil);
    const auto cx = r.range(double(c.x), double(c.x)), cy = r.range(double(c.y), double(c.y));
    bool reached = false;
    for (int i = cx.first; i <= cx.second; ++i)
      for (int j = cy.first; j <= cy.second; ++j)
        if (seen[static_cast<std::size_t>(j) * r.n + i]) reached = true;
    if (reached) out.insert(coil);
  }
  return out;
}

// Euclidean distance helpers for the near-miss filter, um.
inline double point_seg_dist(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double l2 = dx * dx + dy * dy;
  double u = l2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / l2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  return std::hypot(px - (ax + u * dx), py - (ay + u * dy));
}

inline bool seg_cross(double ax, double ay, double bx, double by, double cx, double cy, double dx, double dy) {
  const auto orient = [](double px, double py, double qx, double qy, double rx, double ry) {
    const double v = (qx - px) * (ry - py) - (qy - py) * (rx - px);
    return (v > 0) - (v < 0);
  };
  const int o1 = orient(ax, ay, bx, by, cx, cy), o2 = orient(ax, ay, bx, by, dx, dy);
  const int o3 = orient(cx, cy, dx, dy, ax, ay), o4 = orient(cx, cy, dx, dy, bx, by);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

inline double seg_seg_dist(double ax, double ay, double bx, double by, double cx, double cy, double dx, double dy) {
  if (seg_cross(ax, ay, bx, by, cx, cy, dx, dy)) return 0.0;
  return std::min({point_seg_dist(ax, ay, cx, cy, dx, dy), point_seg_dist(bx, by, cx, cy, dx, dy),
                   point_seg_dist(cx, cy, ax, ay, bx, by), point_seg_dist(dx, dy, ax, ay, bx, by)});
}

}  // namespace oracle
