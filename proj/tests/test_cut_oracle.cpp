#include <chrono>
#include <cmath>

#include "doctest.h"
#include "oracles/raster_cut.hpp"
#include "support/random_cuts.hpp"
#include "wpt/cut_engine.hpp"
#include "wpt/design_sweep.hpp"

using namespace wpt;

namespace {

struct P {
  double x, y;
};

// Double-precision crossing points of one segment pair, overlap endpoints
// included, without the library's rational arithmetic.
void crossings(P a, P b, P c, P d, std::vector<P>& out) {
  const double rx = b.x - a.x, ry = b.y - a.y, sx = d.x - c.x, sy = d.y - c.y;
  const double den = rx * sy - ry * sx;
  const double qpx = c.x - a.x, qpy = c.y - a.y;
  if (den == 0.0) {
    if (qpx * ry - qpy * rx != 0.0) return;
    const double rr = rx * rx + ry * ry;
    double t0 = (qpx * rx + qpy * ry) / rr, t1 = t0 + (sx * rx + sy * ry) / rr;
    if (t0 > t1) std::swap(t0, t1);
    const double lo = std::max(0.0, t0), hi = std::min(1.0, t1);
    if (lo > hi) return;
    out.push_back({a.x + lo * rx, a.y + lo * ry});
    if (hi > lo) out.push_back({a.x + hi * rx, a.y + hi * ry});
    return;
  }
  const double t = (qpx * sy - qpy * sx) / den, u = (qpx * ry - qpy * rx) / den;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return;
  out.push_back({a.x + t * rx, a.y + t * ry});
}

int oracle_crossings(const SheetSpec& spec, CoilIndex coil, const CutScenario& sc) {
  const auto sp = spiral_centerline(spec.coil, coil_center(spec, coil));
  std::vector<P> pts;
  for (const auto& cut : sc.cuts) {
    const auto& q = cut.points;
    const std::size_t m = cut.closed ? q.size() : q.size() - 1;
    for (std::size_t k = 0; k < m; ++k) {
      const P c{double(q[k].x), double(q[k].y)}, d{double(q[(k + 1) % q.size()].x), double(q[(k + 1) % q.size()].y)};
      for (std::size_t i = 0; i + 1 < sp.size(); ++i)
        crossings({double(sp[i].x), double(sp[i].y)}, {double(sp[i + 1].x), double(sp[i + 1].y)}, c, d, pts);
    }
  }
  std::vector<P> uniq;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& u : uniq) dup = dup || (std::abs(u.x - p.x) < 1e-6 && std::abs(u.y - p.y) < 1e-6);
    if (!dup) uniq.push_back(p);
  }
  return static_cast<int>(uniq.size());
}

}  // namespace

TEST_SUITE("cut_oracle") {
  TEST_CASE("x = 55 mm guillotine agrees with the raster oracle") {
    const auto spec = prototype_sheet();
    const auto tree = build_htree(2, spec.pitch);
    const CutScenario sc{{{{{55000, -110000}, {55000, 110000}}, false}}};
    const auto exact = apply_cuts(spec, tree, sc, default_calibration()).surviving_coils;
    CHECK(exact == oracle::raster_survivors(spec, tree, sc));
    CHECK(exact.size() == 12);
  }

  TEST_CASE("200 random scenarios agree with the raster oracle") {
    support::CutGenerator gen(20240611);
    int agree = 0, total = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 200; ++i) {
      const auto s = gen.next();
      const auto tree = build_htree(s.spec.grid_order, s.spec.pitch);
      const auto exact = apply_cuts(s.spec, tree, s.scenario, default_calibration()).surviving_coils;
      const auto raster = oracle::raster_survivors(s.spec, tree, s.scenario);
      ++total;
      if (exact == raster) ++agree;
      else {
        CAPTURE(i);
        CAPTURE(s.spec.grid_order);
        CHECK(exact.size() == raster.size());
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    MESSAGE("oracle agreement " << agree << "/" << total << " in " << secs << " s");
    CHECK(agree == total);
  }

  TEST_CASE("spiral crossing counts agree with a double-precision count") {
    support::CutGenerator gen(99);
    int compared = 0;
    for (int i = 0; i < 60; ++i) {
      const auto s = gen.next();
      const auto tree = build_htree(s.spec.grid_order, s.spec.pitch);
      const auto r = apply_cuts(s.spec, tree, s.scenario, default_calibration());
      for (const auto& c : r.severed_coil_channels) {
        CHECK(c.crossings == oracle_crossings(s.spec, c.coil, s.scenario));
        ++compared;
      }
    }
    CHECK(compared > 20);
  }

  TEST_CASE("guillotine through the coil centres") {
    const auto spec = prototype_sheet();
    const auto tree = build_htree(2, spec.pitch);
    const CutScenario sc{{{{{75000, -110000}, {75000, 110000}}, false}}};
    const auto r = apply_cuts(spec, tree, sc, default_calibration());
    for (const auto& c : r.severed_coil_channels) CHECK(c.crossings == oracle_crossings(spec, c.coil, sc));
  }
}
