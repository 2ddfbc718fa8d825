#include "doctest.h"
#include "httplib.h"
#include "wpt/design_sweep.hpp"
#include "wpt/json_io.hpp"
#include "wpt/service.hpp"

using namespace wpt;
using wpt::io::Json;

namespace {

SheetService make() { return SheetService(prototype_sheet(), default_calibration()); }

Json body(const HttpResponse& r) { return Json::parse(r.body); }

const char* kCut55 = R"({"cuts":[{"points":[[55,-110],[55,110]]}]})";

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("spec round trip over the API") {
    auto s = make();
    const auto get = s.handle("GET", "/spec", "");
    CHECK(get.status == 200);
    CHECK(get.body == io::save_spec(prototype_sheet()));
    const auto put = s.handle("PUT", "/spec", get.body);
    CHECK(put.status == 200);
    CHECK(body(put)["ok"] == true);
    CHECK(s.handle("GET", "/spec", "").body == get.body);
  }

  TEST_CASE("empty cut keeps all sixteen coils") {
    auto s = make();
    const auto r = s.handle("POST", "/cut", R"({"cuts":[]})");
    REQUIRE(r.status == 200);
    CHECK(body(r)["survivor_count"] == 16);
  }

  TEST_CASE("guillotine cut and undo") {
    auto s = make();
    const auto before = s.handle("POST", "/cut", R"({"cuts":[]})").body;
    const auto cut = s.handle("POST", "/cut", kCut55);
    REQUIRE(cut.status == 200);
    const auto j = body(cut);
    CHECK(j["survivor_count"] == 12);
    CHECK(j["severed_coil_channels"].size() == 4);
    CHECK(body(s.handle("GET", "/analysis", ""))["survivor_count"] == 12);
    CHECK(s.handle("POST", "/cut", R"({"cuts":[]})").body == before);
  }

  TEST_CASE("successive cuts never grow the survivor set") {
    auto s = make();
    const auto a = body(s.handle("POST", "/cut", kCut55))["survivor_count"].get<int>();
    const auto b = body(s.handle("POST", "/cut",
                                 R"({"cuts":[{"points":[[55,-110],[55,110]]},{"points":[[-110,55],[110,55]]}]})"))
                       ["survivor_count"]
                           .get<int>();
    CHECK(b <= a);
    CHECK(b == 9);
  }

  TEST_CASE("stroke outside the sheet") {
    auto s = make();
    CHECK(body(s.handle("POST", "/cut", R"({"cuts":[{"points":[[150,-150],[150,150]]}]})"))["survivor_count"] == 16);
  }

  TEST_CASE("sim step over a coil, a removed coil and off the sheet") {
    auto s = make();
    const auto on = body(s.handle("POST", "/sim/step", R"({"x":-25,"y":-25})"));
    CHECK(on["active"] == Json::parse("[[1,1]]"));
    CHECK(on["total_power"].get<double>() > 0.0);
    s.handle("POST", "/cut", kCut55);
    const auto gone = body(s.handle("POST", "/sim/step", R"({"x":75,"y":25})"));
    CHECK(gone["active"].empty());
    CHECK(gone["total_power"] == 0.0);
    const auto off = body(s.handle("POST", "/sim/step", R"({"x":300,"y":0})"));
    CHECK(off["detected"].empty());
    CHECK(s.handle("POST", "/sim/step", R"({"x":"a","y":0})").status == 400);
    CHECK(s.handle("POST", "/sim/step", R"({"x":0,"y":0,"height":"high"})").status == 400);
  }

  TEST_CASE("thick channels surface leak risk") {
    auto s = make();
    auto spec = prototype_sheet();
    spec.coil.xsec.thickness = Length::from_um(2400);
    REQUIRE(s.handle("PUT", "/spec", io::save_spec(spec)).status == 200);
    const auto a = body(s.handle("GET", "/analysis", ""));
    CHECK(a["mech"]["leak_on_cut"] == true);
    CHECK(a["sheet_thickness"] == 3.36);
  }

  TEST_CASE("analysis on defaults") {
    auto s = make();
    const auto a = body(s.handle("GET", "/analysis", ""));
    CHECK(a["electrical"]["q_factor"].get<double>() == doctest::Approx(57.5).epsilon(1e-6));
    CHECK(a["feasible_window"]["t_min"] == 0.36);
    CHECK(a["feasible_window"]["t_max"] == 1.92);
    CHECK(a["sheet_thickness"] == 2.4);
  }

  TEST_CASE("invalid spec is stored and blocks analysis") {
    auto s = make();
    const auto put = s.handle("PUT", "/spec", R"({"coil":{"turns":9}})");
    CHECK(put.status == 400);
    CHECK(body(put)["violations"].size() == 1);
    CHECK(s.handle("GET", "/analysis", "").status == 409);
    CHECK(s.handle("POST", "/cut", R"({"cuts":[]})").status == 409);
    CHECK(s.handle("PUT", "/spec", "{").status == 400);
    CHECK(body(s.handle("GET", "/spec", ""))["coil"]["turns"] == 9);
  }

  TEST_CASE("bad requests") {
    auto s = make();
    CHECK(s.handle("GET", "/nope", "").status == 404);
    CHECK(s.handle("DELETE", "/spec", "").status == 405);
    CHECK(s.handle("POST", "/cut", R"({"cuts":[{"points":[[0,0],[1,1]]}]})").status == 400);
    CHECK(s.handle("POST", "/cut", "not json").status == 400);
  }

  TEST_CASE("geometry") {
    auto s = make();
    const auto svg = s.handle("GET", "/geometry", "", "format=svg&layer=control");
    CHECK(svg.status == 200);
    CHECK(svg.content_type == "image/svg+xml");
    CHECK(svg.body.find("layer-control") != std::string::npos);
    const auto j = body(s.handle("GET", "/geometry", ""));
    CHECK(j["coils"].size() == 16);
    CHECK(j["layers"].contains("coil"));
    CHECK(j["report"].is_null());
    CHECK(s.handle("GET", "/geometry", "", "format=svg&layer=lid").status == 400);
  }

  TEST_CASE("responses depend only on state and request") {
    auto a = make();
    auto b = make();
    a.handle("POST", "/cut", kCut55);
    b.handle("POST", "/cut", R"({"cuts":[]})");
    b.handle("POST", "/cut", kCut55);
    for (const char* path : {"/spec", "/analysis", "/geometry"})
      CHECK(a.handle("GET", path, "").body == b.handle("GET", path, "").body);
    CHECK(a.handle("POST", "/sim/step", R"({"x":-25,"y":25})").body ==
          b.handle("POST", "/sim/step", R"({"x":-25,"y":25})").body);
  }

  TEST_CASE("real HTTP round trip") {
    SheetService s(prototype_sheet(), default_calibration());
    const int port = s.start_background("127.0.0.1");
    REQUIRE(port > 0);
    httplib::Client cli("127.0.0.1", port);
    auto get = cli.Get("/spec");
    REQUIRE(get);
    CHECK(get->status == 200);
    auto cut = cli.Post("/cut", kCut55, "application/json");
    REQUIRE(cut);
    CHECK(Json::parse(cut->body)["survivor_count"] == 12);
    auto geo = cli.Get("/geometry?format=svg&layer=coil");
    REQUIRE(geo);
    CHECK(geo->get_header_value("Content-Type").find("svg") != std::string::npos);
    s.stop();
  }
}
