#include <cmath>

#include "doctest.h"
#include "oracles/hand_formulas.hpp"
#include "wpt/core_model.hpp"

using namespace wpt;

namespace {

// Length of the rendered polyline, summed segment by segment.
double traced_length_mm(const CoilSpec& c) {
  const auto pts = spiral_centerline(c, {0, 0});
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    sum += std::hypot(double(pts[i + 1].x - pts[i].x), double(pts[i + 1].y - pts[i].y));
  return sum / 1000.0;
}

// Closed square loops traced corner to corner, one per turn.
double loop_trace_mm(double outer, int turns, double w, double s) {
  double sum = 0.0;
  for (int i = 0; i < turns; ++i) {
    const double h = (outer - w) / 2.0 - i * (w + s);
    const double xs[5] = {-h, h, h, -h, -h}, ys[5] = {-h, -h, h, h, -h};
    for (int k = 0; k < 4; ++k) sum += std::hypot(xs[k + 1] - xs[k], ys[k + 1] - ys[k]);
  }
  return sum;
}

CoilSpec coil(int outer_um, int turns, int w_um, int s_um) {
  CoilSpec c;
  c.outer_side = Length::from_um(outer_um);
  c.turns = turns;
  c.xsec.width = Length::from_um(w_um);
  c.xsec.spacing = Length::from_um(s_um);
  return c;
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("length fixed point") {
    CHECK(Length::from_mm(1.44).um() == 1440);
    CHECK(Length::from_mm(0.0004).um() == 0);
    CHECK(format_mm(1440) == "1.440");
    CHECK(format_mm(-50) == "-0.050");
  }

  TEST_CASE("sheet thickness adds both walls") {
    CHECK(sheet_thickness(ChannelXSection{}).um() == 2400);
  }

  TEST_CASE("conductor length examples") {
    CHECK(coil_conductor_length(coil(40000, 1, 1200, 1200)).um() == 155200);
    CHECK(coil_conductor_length(coil(40000, 4, 1200, 1200)).um() == 505600);
    CHECK(coil_conductor_length(coil(10000, 2, 1000, 1000)).um() == 56000);
  }

  TEST_CASE("conductor length matches loop trace") {
    CHECK(coil_conductor_length(coil(40000, 4, 1200, 1200)).mm() ==
          doctest::Approx(loop_trace_mm(40, 4, 1.2, 1.2)).epsilon(1e-12));
    CHECK(coil_conductor_length(coil(10000, 2, 1000, 1000)).mm() ==
          doctest::Approx(loop_trace_mm(10, 2, 1, 1)).epsilon(1e-12));
    oracle::Coil o;
    CHECK(coil_conductor_length(CoilSpec{}).mm() == doctest::Approx(oracle::length_mm(o)).epsilon(1e-12));
  }

  TEST_CASE("rendered spiral differs from the analytic length by the exit gap") {
    // The last side stops one turn pitch short to leave room for the exit.
    for (const auto& c : {coil(40000, 4, 1200, 1200), coil(10000, 2, 1000, 1000), coil(40000, 1, 1200, 1200)}) {
      const double analytic = coil_conductor_length(c).mm();
      CHECK(traced_length_mm(c) == doctest::Approx(analytic - (c.xsec.width + c.xsec.spacing).mm()).epsilon(1e-12));
    }
    const double analytic = coil_conductor_length(CoilSpec{}).mm();
    CHECK(std::abs(traced_length_mm(CoilSpec{}) - analytic) / analytic < 0.01);
  }

  TEST_CASE("rendered spiral is rectilinear and stays inside its envelope") {
    const CoilSpec c;
    const auto pts = spiral_centerline(c, {1000, -2000});
    REQUIRE(pts.size() > 4);
    const std::int64_t lim = (c.outer_side.um() - c.xsec.width.um()) / 2;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const bool dx = pts[i].x != pts[i + 1].x, dy = pts[i].y != pts[i + 1].y;
      CHECK(dx != dy);
    }
    for (const auto& p : pts) {
      CHECK(std::abs(p.x - 1000) <= lim);
      CHECK(std::abs(p.y + 2000) <= lim);
    }
  }

  TEST_CASE("conductor length strictly increases in turns and outer side") {
    std::int64_t prev = 0;
    for (int n = 1; n <= 8; ++n) {
      const auto l = coil_conductor_length(coil(40000, n, 1200, 1200)).um();
      CHECK(l > prev);
      prev = l;
    }
    prev = 0;
    for (int o = 20000; o <= 60000; o += 5000) {
      const auto l = coil_conductor_length(coil(o, 4, 1200, 1200)).um();
      CHECK(l > prev);
      prev = l;
    }
  }

  TEST_CASE("spiral that does not fit is rejected") {
    CHECK_THROWS_AS(coil_conductor_length(coil(40000, 9, 1200, 1200)), ValidationError);
  }

  TEST_CASE("recycle ledger") {
    const MaterialDb m;
    CHECK(recycle_project(100.0, 0, m).final_mass() == 100.0);
    CHECK(recycle_project(100.0, 1, m).final_mass() == doctest::Approx(98.0).epsilon(1e-12));
    const auto four = recycle_project(100.0, 4, m);
    CHECK(std::abs(four.final_mass() - 92.24) <= 0.01);
    CHECK(four.final_mass() == doctest::Approx(oracle::recovered(100.0, 0.98, 4)).epsilon(1e-12));
    REQUIRE(four.cycle_records.size() == 5);
    for (std::size_t i = 1; i < four.cycle_records.size(); ++i) {
      CHECK(four.cycle_records[i].recovered_mass <= four.cycle_records[i - 1].recovered_mass);
      CHECK(four.cycle_records[i].resistivity == 0.32e-3);
    }
    MaterialDb lossless;
    lossless.recovery_fraction_per_cycle = 1.0;
    for (const auto& r : recycle_project(50.0, 6, lossless).cycle_records) CHECK(r.recovered_mass == 50.0);
    CHECK_THROWS_AS(recycle_project(0.0, 1, m), ValidationError);
    CHECK_THROWS_AS(recycle_project(10.0, -1, m), ValidationError);
  }

  TEST_CASE("validation examples") {
    CHECK(validate_sheet(prototype_sheet()).empty());

    auto thin = prototype_sheet();
    thin.coil.xsec.thickness = Length::from_um(100);
    const auto v = validate_sheet(thin);
    REQUIRE(v.size() == 1);
    CHECK(v[0].message == "thickness below admissible 0.24 mm");

    auto nine = prototype_sheet();
    nine.coil.turns = 9;
    const auto w = validate_sheet(nine);
    REQUIRE(w.size() == 1);
    CHECK(w[0].field == "coil.inner_opening");
    CHECK_THROWS_AS(require_valid(nine), ValidationError);
  }

  TEST_CASE("single field past its bound yields one violation naming it") {
    struct Case {
      const char* field;
      void (*mutate)(SheetSpec&);
    };
    const Case cases[] = {
        {"grid_order", [](SheetSpec& s) { s.grid_order = 0; }},
        {"pitch", [](SheetSpec& s) { s.pitch = Length::from_um(0); }},
        {"coil.turns", [](SheetSpec& s) { s.coil.turns = 0; }},
        {"coil.xsec.thickness", [](SheetSpec& s) { s.coil.xsec.thickness = Length::from_um(4900); }},
        {"coil.xsec.wall", [](SheetSpec& s) { s.coil.xsec.wall = Length::from_um(0); }},
        {"materials.lm_resistivity", [](SheetSpec& s) { s.materials.lm_resistivity = -1.0; }},
        {"materials.recovery_fraction_per_cycle", [](SheetSpec& s) { s.materials.recovery_fraction_per_cycle = 1.5; }},
        {"materials.contact_resistance_per_joint", [](SheetSpec& s) { s.materials.contact_resistance_per_joint = -1.0; }},
        {"frequency", [](SheetSpec& s) { s.frequency = 0.0; }},
        {"layers", [](SheetSpec& s) { s.layers.pop_back(); }},
    };
    for (const auto& c : cases) {
      auto s = prototype_sheet();
      c.mutate(s);
      const auto v = validate_sheet(s);
      CAPTURE(c.field);
      REQUIRE(v.size() == 1);
      CHECK(v[0].field == c.field);
    }
  }

  TEST_CASE("narrow pitch only warns") {
    auto s = prototype_sheet();
    CHECK(layout_warnings(s).empty());
    s.pitch = Length::from_um(42000);
    CHECK(validate_sheet(s).empty());
    CHECK(layout_warnings(s).size() == 1);
  }

  TEST_CASE("coil centres sit on the pitch lattice around the root") {
    const auto s = prototype_sheet();
    CHECK(coil_center(s, {0, 0}) == PointUm{-75000, -75000});
    CHECK(coil_center(s, {3, 2}) == PointUm{25000, 75000});
  }

  TEST_CASE("layer role names") {
    for (auto r : {LayerRole::coil, LayerRole::ground_shield, LayerRole::control})
      CHECK(layer_role_from_string(to_string(r)) == r);
  }
}
