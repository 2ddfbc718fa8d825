// wptsheet: command-line front end for the sheet design toolkit.
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wpt/design_sweep.hpp"
#include "wpt/export.hpp"
#include "wpt/json_io.hpp"
#include "wpt/service.hpp"

namespace fs = std::filesystem;
using namespace wpt;
using io::Json;

namespace {

struct Common {
  std::string spec_path;
  std::string calibration_path;
  std::string scenario_path;
  std::string out_dir;
  std::string format;
};

// Validation failures carry the violation list to stderr.
struct InvalidSpec : std::runtime_error {
  std::vector<Violation> violations;
  explicit InvalidSpec(std::vector<Violation> v) : std::runtime_error("invalid spec"), violations(std::move(v)) {}
};

SheetSpec load_valid_spec(const std::string& path) {
  if (path.empty()) throw InputError("--spec is required");
  SheetSpec spec = io::load_spec(io::read_file(path));
  auto v = validate_sheet(spec);
  if (!v.empty()) throw InvalidSpec(std::move(v));
  for (const auto& w : layout_warnings(spec)) std::cerr << "warning: " << w << "\n";
  return spec;
}

Calibration load_calibration(const std::string& path) {
  if (!path.empty()) return io::calibration_from_json(io::parse(io::read_file(path), "calibration"));
  if (fs::exists(WPT_DEFAULT_CALIBRATION))
    return io::calibration_from_json(io::parse(io::read_file(WPT_DEFAULT_CALIBRATION), "calibration"));
  return default_calibration();
}

CutScenario load_scenario(const std::string& path) {
  if (path.empty()) return {};
  return io::scenario_from_json(io::parse(io::read_file(path), "scenario"));
}

fs::path out_dir(const std::string& dir) {
  if (dir.empty()) throw InputError("--out-dir is required");
  fs::create_directories(dir);
  return dir;
}

void write_layers(const fs::path& dir, const SheetSpec& spec, const std::function<std::string(LayerRole)>& svg,
                  Json& files) {
  for (auto role : spec.layers) {
    const auto p = dir / ("sheet_" + to_string(role) + ".svg");
    io::write_file(p.string(), svg(role));
    files.push_back(p.filename().string());
  }
}

int cmd_gen(const Common& c) {
  const auto spec = load_valid_spec(c.spec_path);
  const auto tree = build_htree(spec.grid_order, spec.pitch);
  const auto dir = out_dir(c.out_dir);
  Json files = Json::array();
  io::write_file((dir / "routing_tree.json").string(), io::canonical(io::to_json(tree)));
  files.push_back("routing_tree.json");
  write_layers(dir, spec, [&](LayerRole r) { return exporter::layer_svg(spec, tree, r); }, files);
  const auto mesh = exporter::body_mesh(spec, tree);
  io::write_file((dir / "sheet.stl").string(), exporter::stl_binary(mesh));
  io::write_file((dir / "sheet.fab.json").string(), io::canonical(exporter::fab_sidecar(spec)));
  files.push_back("sheet.stl");
  files.push_back("sheet.fab.json");
  std::cout << Json{{"coils", tree.leaves.size()},
                    {"segments", tree.segments.size()},
                    {"total_wire_length_mm", tree.total_length().mm()},
                    {"triangles", mesh.size()},
                    {"files", files}}
                   .dump(2)
            << "\n";
  return 0;
}

int cmd_cut(const Common& c) {
  const auto spec = load_valid_spec(c.spec_path);
  const auto cal = load_calibration(c.calibration_path);
  const auto tree = build_htree(spec.grid_order, spec.pitch);
  const auto report = apply_cuts(spec, tree, load_scenario(c.scenario_path), cal);
  const auto text = io::canonical(io::to_json(report, spec.coil.xsec));
  if (!c.out_dir.empty()) io::write_file((out_dir(c.out_dir) / "cut_report.json").string(), text);
  std::cout << text;
  return 0;
}

int cmd_analyze(const Common& c, double rx_height) {
  const auto spec = load_valid_spec(c.spec_path);
  const auto cal = load_calibration(c.calibration_path);
  Json out;
  const auto e = q_factor(spec.coil, spec.materials, spec.frequency, cal);
  out["electrical"] = io::to_json(e);
  out["mech"] = io::to_json(mech_report(spec, cal));
  const auto win = feasible_window(spec, cal);
  out["feasible_window"] =
      win.feasible ? Json{{"t_min", win.t_min.mm()}, {"t_max", win.t_max.mm()}} : Json{{"infeasible", true}};
  const auto cp = coupling(spec.coil, {0, 0, 0}, e.q_factor, spec.coil, {0, 0, rx_height}, e.q_factor);
  out["coupling"] = {{"rx_height_mm", rx_height},
                     {"mutual", cp.mutual},
                     {"k_coupling", cp.k_coupling},
                     {"link_efficiency", cp.link_efficiency}};
  out["sheet_thickness"] = sheet_thickness(spec.coil.xsec).mm();
  const auto tree = build_htree(spec.grid_order, spec.pitch);
  out["feed_resistance"] =
      feed_resistance(tree, tree.leaves.begin()->first, spec.coil.xsec, spec.materials);
  std::cout << io::canonical(out);
  return 0;
}

int cmd_sim(const Common& c, const std::string& rx_path, double dt, double grid_step) {
  const auto spec = load_valid_spec(c.spec_path);
  const auto cal = load_calibration(c.calibration_path);
  const auto tree = build_htree(spec.grid_order, spec.pitch);
  const auto report = apply_cuts(spec, tree, load_scenario(c.scenario_path), cal);
  if (rx_path.empty()) throw InputError("--rx is required");
  const auto rx = io::rx_from_json(io::parse(io::read_file(rx_path), "rx"), spec);
  const auto ctx = make_context(spec, report.surviving_coils, cal);
  const Policy policy;
  const auto trace = to_ndjson(run_sim(ctx, rx, policy, dt));
  const auto cov = coverage_map(ctx, rx, policy, grid_step);
  if (!c.out_dir.empty()) {
    const auto dir = out_dir(c.out_dir);
    io::write_file((dir / "trace.ndjson").string(), trace);
    io::write_file((dir / "coverage.csv").string(), io::coverage_csv(cov));
    io::write_file((dir / "coverage.json").string(), io::canonical(io::to_json(cov)));
  }
  if (c.format == "csv") std::cout << io::coverage_csv(cov);
  else if (c.format == "json") std::cout << io::canonical(io::to_json(cov));
  else std::cout << trace;
  return 0;
}

int cmd_sweep(const Common& c, const std::vector<double>& grid_mm, const std::string& objective, double knee) {
  const auto spec = load_valid_spec(c.spec_path);
  const auto cal = load_calibration(c.calibration_path);
  std::vector<Length> grid;
  for (double t : grid_mm) grid.push_back(Length::from_mm(t));
  if (grid.empty()) grid = default_thickness_grid();
  const auto rows = sweep_thickness(spec, grid, cal);
  SelectOptions opt;
  opt.objective = objective == "max_q" ? Objective::max_q : Objective::knee;
  opt.knee_tolerance = knee;
  const auto sel = select_design(rows, opt, spec.coil.xsec.wall);
  if (!c.out_dir.empty()) {
    const auto dir = out_dir(c.out_dir);
    io::write_file((dir / "sweep.csv").string(), io::sweep_csv(rows));
    io::write_file((dir / "sweep.json").string(), io::canonical(io::to_json(rows)));
    io::write_file((dir / "selection.json").string(), io::canonical(io::to_json(sel)));
  }
  if (c.format == "json") {
    std::cout << io::canonical(Json{{"rows", io::to_json(rows)}, {"selection", io::to_json(sel)}});
  } else {
    std::cout << io::sweep_csv(rows) << "# selected thickness_mm=" << format_mm(sel.thickness.um())
              << " sheet_mm=" << format_mm(sel.sheet_thickness.um()) << " rule=" << sel.rule << "\n";
  }
  return 0;
}

int cmd_export(const Common& c) {
  const auto spec = load_valid_spec(c.spec_path);
  const auto cal = load_calibration(c.calibration_path);
  const auto tree = build_htree(spec.grid_order, spec.pitch);
  const auto sc = load_scenario(c.scenario_path);
  const auto report = apply_cuts(spec, tree, sc, cal);
  const auto dir = out_dir(c.out_dir);
  Json files = Json::array();
  write_layers(dir, spec, [&](LayerRole r) { return exporter::layer_svg_post_cut(spec, tree, sc, report, r); },
               files);
  const auto mesh = exporter::body_mesh_post_cut(spec, tree, sc);
  io::write_file((dir / "sheet.stl").string(), exporter::stl_binary(mesh, "wptsheet body (post-cut)"));
  io::write_file((dir / "sheet.fab.json").string(), io::canonical(exporter::fab_sidecar(spec)));
  Json seal = Json::array();
  for (const auto& e : sealing_manifest(report, spec.coil.xsec))
    seal.push_back({{"location", {e.location.x / 1000.0, e.location.y / 1000.0}},
                    {"area_mm2", e.area_mm2},
                    {"kind", e.feed ? "feed" : "coil"}});
  io::write_file((dir / "sealing_manifest.json").string(), io::canonical(seal));
  files.push_back("sheet.stl");
  files.push_back("sheet.fab.json");
  files.push_back("sealing_manifest.json");
  std::cout << Json{{"survivors", report.surviving_coils.size()},
                    {"seal_entries", seal.size()},
                    {"triangles", mesh.size()},
                    {"files", files}}
                   .dump(2)
            << "\n";
  return 0;
}

int cmd_calibrate(const Common& c, double q_ref, double q_high, bool no_q_high, const std::string& out) {
  const SheetSpec spec = c.spec_path.empty() ? prototype_sheet() : load_valid_spec(c.spec_path);
  Anchors a;
  a.q_value = q_ref;
  if (no_q_high) a.q_high_value.reset();
  else a.q_high_value = q_high;
  const auto cal = calibrate(spec, a);
  for (const auto& w : cal.warnings) std::cerr << "warning: " << w << "\n";
  const auto text = io::canonical(io::to_json(cal));
  if (!out.empty()) io::write_file(out, text);
  std::cout << text;
  return 0;
}

int cmd_serve(const Common& c, const std::string& host, int port) {
  SheetSpec spec = prototype_sheet();
  if (!c.spec_path.empty()) spec = io::load_spec(io::read_file(c.spec_path));
  SheetService svc(spec, load_calibration(c.calibration_path));
  svc.serve(host, port, [](int p) { std::cerr << "listening on port " << p << std::endl; });
  return 0;
}

int cmd_recycle(double mass, int cycles, const std::string& spec_path) {
  const SheetSpec spec = spec_path.empty() ? prototype_sheet() : load_valid_spec(spec_path);
  const auto ledger = recycle_project(mass, cycles, spec.materials);
  Json rows = Json::array();
  for (const auto& r : ledger.cycle_records)
    rows.push_back({{"cycle", r.cycle_index},
                    {"injected_mass_g", r.injected_mass},
                    {"recovered_mass_g", r.recovered_mass},
                    {"resistivity_ohm_mm", r.resistivity},
                    {"contact_resistance_ohm", r.contact_resistance}});
  std::cout << io::canonical(Json{{"cycles", rows}, {"final_mass_g", ledger.final_mass()}});
  return 0;
}

int fail(int code, const Json& j) {
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design toolkit for cuttable liquid-metal WPT sheets"};
  app.require_subcommand(1);
  Common c;
  const auto add_common = [&](CLI::App* s, bool scenario, bool out) {
    s->add_option("--spec", c.spec_path, "SheetSpec JSON");
    s->add_option("--calibration", c.calibration_path, "calibration JSON (default: shipped file)");
    if (scenario) s->add_option("--scenario", c.scenario_path, "CutScenario JSON");
    if (out) s->add_option("--out-dir", c.out_dir, "output directory");
  };

  auto* spec_default = app.add_subcommand("spec-default", "print the prototype SheetSpec");
  auto* gen = app.add_subcommand("gen", "routing tree, layer SVGs and STL body");
  add_common(gen, false, true);
  auto* cut = app.add_subcommand("cut", "apply a cut scenario and report survivors");
  add_common(cut, true, true);
  auto* analyze = app.add_subcommand("analyze", "electrical and mechanical report");
  add_common(analyze, false, false);
  double rx_height = 5.0;
  analyze->add_option("--rx-height", rx_height, "coaxial RX height for the coupling figure, mm");

  auto* sim = app.add_subcommand("sim", "protocol simulation trace and coverage map");
  add_common(sim, true, true);
  std::string rx_path;
  double dt = 0.05, grid_step = 5.0;
  sim->add_option("--rx", rx_path, "RX device JSON (path, height, q_rx)")->required();
  sim->add_option("--dt", dt, "time step, s");
  sim->add_option("--grid", grid_step, "coverage grid step, mm");
  sim->add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"ndjson", "csv", "json"}));

  auto* sweep = app.add_subcommand("sweep", "thickness sweep and design selection");
  add_common(sweep, false, true);
  std::vector<double> grid_mm;
  std::string objective = "knee";
  double knee = SelectOptions{}.knee_tolerance;
  sweep->add_option("--grid", grid_mm, "thickness grid, mm")->delimiter(',');
  sweep->add_option("--objective", objective)->check(CLI::IsMember({"knee", "max_q"}));
  sweep->add_option("--knee-tolerance", knee, "fraction of best Q");
  sweep->add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));

  auto* exp = app.add_subcommand("export", "geometry of the retained sheet after cuts");
  add_common(exp, true, true);

  auto* serve = app.add_subcommand("serve", "local JSON service for the designer UI");
  add_common(serve, false, false);
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port);
  serve->add_option("--host", host);

  auto* cal = app.add_subcommand("calibrate", "fit model constants to the anchors");
  add_common(cal, false, false);
  double q_ref = 57.5, q_high = 55.5;
  bool no_q_high = false;
  std::string cal_out;
  cal->add_option("--q-ref", q_ref, "Q at 1.44 mm");
  cal->add_option("--q-high", q_high, "Q at 4.8 mm");
  cal->add_flag("--no-q-high", no_q_high, "drop the 4.8 mm anchor");
  cal->add_option("--out", cal_out, "write calibration JSON here");

  auto* recycle = app.add_subcommand("recycle", "recovered mass over dissolution cycles");
  double mass = 100.0;
  int cycles = 4;
  recycle->add_option("--mass", mass, "initial mass, g");
  recycle->add_option("--cycles", cycles);
  recycle->add_option("--spec", c.spec_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(2, io::error_json("usage_error", e.what()));
  }

  try {
    if (*spec_default) {
      std::cout << io::save_spec(prototype_sheet());
      return 0;
    }
    if (*gen) return cmd_gen(c);
    if (*cut) return cmd_cut(c);
    if (*analyze) return cmd_analyze(c, rx_height);
    if (*sim) return cmd_sim(c, rx_path, dt, grid_step);
    if (*sweep) return cmd_sweep(c, grid_mm, objective, knee);
    if (*exp) return cmd_export(c);
    if (*serve) return cmd_serve(c, host, port);
    if (*cal) return cmd_calibrate(c, q_ref, q_high, no_q_high, cal_out);
    if (*recycle) return cmd_recycle(mass, cycles, c.spec_path);
  } catch (const InvalidSpec& e) {
    return fail(2, io::error_json("validation_error", "spec violates its invariants", e.violations));
  } catch (const InputError& e) {
    return fail(2, io::error_json("input_error", e.what()));
  } catch (const ValidationError& e) {
    return fail(2, io::error_json("validation_error", e.what()));
  } catch (const DomainError& e) {
    return fail(1, io::error_json("domain_error", e.what()));
  } catch (const fs::filesystem_error& e) {
    return fail(2, io::error_json("input_error", e.what()));
  }
  return 0;
}
