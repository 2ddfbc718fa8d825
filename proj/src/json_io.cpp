#include "wpt/json_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace wpt::io {

namespace {

double mm(std::int64_t um) { return static_cast<double>(um) / 1000.0; }

Json point_mm(const geom::PointD& p) { return Json::array({p.x / 1000.0, p.y / 1000.0}); }
Json coil_json(CoilIndex c) { return Json::array({c.row, c.col}); }

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be a JSON object");
}

void reject_unknown(const Json& j, const std::set<std::string>& keys, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) throw InputError("unknown field " + where + it.key());
}

double number(const Json& j, const std::string& name) {
  if (!j.is_number()) throw InputError("field " + name + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError("field " + name + " must be finite");
  return v;
}

int integer(const Json& j, const std::string& name) {
  const double v = number(j, name);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw InputError("field " + name + " must be an integer");
  return static_cast<int>(v);
}

Length length(const Json& j, const std::string& name) {
  const double v = number(j, name);
  if (std::abs(v) > 1e7) throw InputError("field " + name + " out of range");
  return Length::from_mm(v);
}

template <class F>
void opt(const Json& j, const char* key, F&& f) {
  if (auto it = j.find(key); it != j.end()) f(*it);
}

Json xsec_json(const ChannelXSection& x) {
  return {{"width", mm(x.width.um())},
          {"thickness", mm(x.thickness.um())},
          {"spacing", mm(x.spacing.um())},
          {"wall", mm(x.wall.um())}};
}

ChannelXSection xsec_from(const Json& j, ChannelXSection x) {
  require_object(j, "coil.xsec");
  reject_unknown(j, {"width", "thickness", "spacing", "wall"}, "coil.xsec.");
  opt(j, "width", [&](const Json& v) { x.width = length(v, "coil.xsec.width"); });
  opt(j, "thickness", [&](const Json& v) { x.thickness = length(v, "coil.xsec.thickness"); });
  opt(j, "spacing", [&](const Json& v) { x.spacing = length(v, "coil.xsec.spacing"); });
  opt(j, "wall", [&](const Json& v) { x.wall = length(v, "coil.xsec.wall"); });
  return x;
}

Json coil_spec_json(const CoilSpec& c) {
  return {{"outer_side", mm(c.outer_side.um())}, {"turns", c.turns}, {"xsec", xsec_json(c.xsec)}};
}

CoilSpec coil_from(const Json& j, CoilSpec c) {
  require_object(j, "coil");
  reject_unknown(j, {"outer_side", "turns", "xsec"}, "coil.");
  opt(j, "outer_side", [&](const Json& v) { c.outer_side = length(v, "coil.outer_side"); });
  opt(j, "turns", [&](const Json& v) { c.turns = integer(v, "coil.turns"); });
  opt(j, "xsec", [&](const Json& v) { c.xsec = xsec_from(v, c.xsec); });
  return c;
}

Json polyline_json(const std::vector<geom::PointD>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(point_mm(p));
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------

Json to_json(const SheetSpec& s) {
  Json layers = Json::array();
  for (auto r : s.layers) layers.push_back(to_string(r));
  const auto& m = s.materials;
  return {{"grid_order", s.grid_order},
          {"pitch", mm(s.pitch.um())},
          {"coil", coil_spec_json(s.coil)},
          {"materials",
           {{"lm_resistivity", m.lm_resistivity},
            {"lm_density", m.lm_density},
            {"lm_surface_tension", m.lm_surface_tension},
            {"pva_youngs_modulus", m.pva_youngs_modulus},
            {"pva_relative_permittivity", m.pva_relative_permittivity},
            {"pva_shear_strength", m.pva_shear_strength},
            {"contact_resistance_per_joint", m.contact_resistance_per_joint},
            {"recovery_fraction_per_cycle", m.recovery_fraction_per_cycle}}},
          {"frequency", s.frequency},
          {"layers", layers}};
}

SheetSpec spec_from_json(const Json& j) {
  require_object(j, "spec");
  reject_unknown(j, {"grid_order", "pitch", "coil", "materials", "frequency", "layers"}, "");
  SheetSpec s = prototype_sheet();
  opt(j, "grid_order", [&](const Json& v) { s.grid_order = integer(v, "grid_order"); });
  opt(j, "pitch", [&](const Json& v) { s.pitch = length(v, "pitch"); });
  opt(j, "coil", [&](const Json& v) { s.coil = coil_from(v, s.coil); });
  opt(j, "frequency", [&](const Json& v) { s.frequency = number(v, "frequency"); });
  opt(j, "materials", [&](const Json& v) {
    require_object(v, "materials");
    auto& m = s.materials;
    const std::pair<const char*, double*> fields[] = {
        {"lm_resistivity", &m.lm_resistivity},
        {"lm_density", &m.lm_density},
        {"lm_surface_tension", &m.lm_surface_tension},
        {"pva_youngs_modulus", &m.pva_youngs_modulus},
        {"pva_relative_permittivity", &m.pva_relative_permittivity},
        {"pva_shear_strength", &m.pva_shear_strength},
        {"contact_resistance_per_joint", &m.contact_resistance_per_joint},
        {"recovery_fraction_per_cycle", &m.recovery_fraction_per_cycle}};
    std::set<std::string> keys;
    for (auto& [k, _] : fields) keys.insert(k);
    reject_unknown(v, keys, "materials.");
    for (auto& [k, dst] : fields) opt(v, k, [&](const Json& x) { *dst = number(x, std::string("materials.") + k); });
  });
  opt(j, "layers", [&](const Json& v) {
    if (!v.is_array()) throw InputError("field layers must be an array");
    s.layers.clear();
    for (const auto& r : v) {
      if (!r.is_string()) throw InputError("layers entries must be strings");
      try {
        s.layers.push_back(layer_role_from_string(r.get<std::string>()));
      } catch (const std::exception& e) {
        throw InputError(e.what());
      }
    }
  });
  return s;
}

std::string canonical(const Json& j) { return j.dump(2) + "\n"; }

std::string save_spec(const SheetSpec& spec) { return canonical(to_json(spec)); }

Json parse(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(what + ": " + e.what());
  }
}

SheetSpec load_spec(const std::string& text) { return spec_from_json(parse(text, "spec")); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << data;
  if (!out) throw InputError("write failed: " + path);
}

Json to_json(const RoutingTree& t) {
  Json nodes = Json::array(), segs = Json::array(), leaves = Json::array();
  for (const auto& n : t.nodes) nodes.push_back({{"id", n.id}, {"x", mm(n.position.x)}, {"y", mm(n.position.y)}});
  for (const auto& s : t.segments)
    segs.push_back({{"id", s.id},
                    {"node_a", s.node_a},
                    {"node_b", s.node_b},
                    {"level", s.level},
                    {"length", mm(t.segment_length(s).um())}});
  for (const auto& [idx, node] : t.leaves) leaves.push_back({{"coil", coil_json(idx)}, {"node", node}});
  return {{"order", t.order},
          {"pitch", mm(t.pitch.um())},
          {"root", t.root},
          {"nodes", nodes},
          {"segments", segs},
          {"leaves", leaves},
          {"total_length", mm(t.total_length().um())}};
}

Json to_json(const CutScenario& sc) {
  Json cuts = Json::array();
  for (const auto& c : sc.cuts) {
    Json pts = Json::array();
    for (const auto& p : c.points) pts.push_back(Json::array({mm(p.x), mm(p.y)}));
    cuts.push_back({{"points", pts}, {"closed", c.closed}});
  }
  return {{"cuts", cuts}};
}

CutScenario scenario_from_json(const Json& j) {
  require_object(j, "scenario");
  reject_unknown(j, {"cuts"}, "scenario.");
  CutScenario sc;
  auto it = j.find("cuts");
  if (it == j.end()) return sc;
  if (!it->is_array()) throw InputError("field cuts must be an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const Json& c = (*it)[i];
    const std::string tag = "cuts[" + std::to_string(i) + "]";
    require_object(c, tag);
    reject_unknown(c, {"points", "closed"}, tag + ".");
    CutPolyline pl;
    opt(c, "closed", [&](const Json& v) {
      if (!v.is_boolean()) throw InputError(tag + ".closed must be a boolean");
      pl.closed = v.get<bool>();
    });
    auto pts = c.find("points");
    if (pts == c.end() || !pts->is_array()) throw InputError(tag + ".points must be an array");
    for (const auto& p : *pts) {
      if (!p.is_array() || p.size() != 2) throw InputError(tag + ": each point must be [x, y]");
      pl.points.push_back({length(p[0], tag).um(), length(p[1], tag).um()});
    }
    sc.cuts.push_back(std::move(pl));
  }
  return sc;
}

Json to_json(const CutReport& r, const ChannelXSection& xsec) {
  Json survivors = Json::array(), segs = Json::array(), coils = Json::array(), holes = Json::array(),
       seal = Json::array();
  for (auto c : r.surviving_coils) survivors.push_back(coil_json(c));
  for (const auto& s : r.severed_segments) segs.push_back({{"segment", s.segment_id}, {"point", point_mm(s.cut_point)}});
  for (const auto& c : r.severed_coil_channels)
    coils.push_back({{"coil", coil_json(c.coil)}, {"crossings", c.crossings}, {"points", polyline_json(c.points)}});
  for (const auto& h : r.retained_outline.holes) holes.push_back(polyline_json(h));
  for (const auto& e : sealing_manifest(r, xsec))
    seal.push_back({{"location", point_mm(e.location)}, {"area_mm2", e.area_mm2}, {"kind", e.feed ? "feed" : "coil"}});
  return {{"surviving_coils", survivors},
          {"survivor_count", r.surviving_coils.size()},
          {"severed_segments", segs},
          {"severed_coil_channels", coils},
          {"retained_outline", {{"outer", polyline_json(r.retained_outline.outer)}, {"holes", holes}}},
          {"sealing_manifest", seal},
          {"leak_risk", r.leak_risk},
          {"root_severed", r.root_severed}};
}

Json to_json(const ElectricalReport& r) {
  return {{"r_dc", r.r_dc},
          {"r_ac", r.r_ac},
          {"skin_depth", r.skin_depth},
          {"inductance", r.inductance},
          {"stray_capacitance", r.stray_capacitance},
          {"f_self_resonance", r.f_self_resonance},
          {"r_dielectric", r.r_dielectric},
          {"q_factor", r.q_factor},
          {"loss_calibration", r.loss_calibration}};
}

Json to_json(const MechReport& r) {
  return {{"bending_stiffness", r.bending_stiffness},
          {"cutting_force_index", r.cutting_force_index},
          {"injection_pressure", r.injection_pressure},
          {"retention_ratio", r.retention_ratio},
          {"injectable", r.injectable},
          {"leak_on_cut", r.leak_on_cut},
          {"feasible", r.feasible}};
}

Json to_json(const Selection& s) {
  return {{"thickness", mm(s.thickness.um())},
          {"sheet_thickness", mm(s.sheet_thickness.um())},
          {"q_factor", s.q_factor},
          {"q_max", s.q_max},
          {"rule", s.rule},
          {"justification", s.justification}};
}

Json to_json(const std::vector<SweepRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows)
    a.push_back({{"thickness", mm(r.thickness.um())},
                 {"q_factor", r.q_factor ? Json(*r.q_factor) : Json(nullptr)},
                 {"bending_stiffness", r.bending_stiffness},
                 {"cutting_force", r.cutting_force},
                 {"injectable", r.injectable},
                 {"leak_on_cut", r.leak_on_cut},
                 {"feasible", r.feasible}});
  return a;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "thickness_mm,q_factor,EI,F_cut,injectable,leak,feasible\n";
  os << std::setprecision(10);
  for (const auto& r : rows) {
    os << format_mm(r.thickness.um()) << ',';
    if (r.q_factor) os << *r.q_factor;
    else os << "NA";
    os << ',' << r.bending_stiffness << ',' << r.cutting_force << ',' << r.injectable << ',' << r.leak_on_cut
       << ',' << r.feasible << '\n';
  }
  return os.str();
}

Json to_json(const Calibration& c) {
  return {{"loss_calibration", c.loss_calibration},
          {"tan_delta_eff", c.tan_delta_eff},
          {"c_mech", c.c_mech},
          {"c_cut", c.c_cut},
          {"p_max", c.p_max},
          {"c_leak", c.c_leak},
          {"provenance", c.provenance},
          {"warnings", c.warnings}};
}

Calibration calibration_from_json(const Json& j) {
  require_object(j, "calibration");
  Calibration c;
  const std::pair<const char*, double*> fields[] = {{"loss_calibration", &c.loss_calibration},
                                                    {"tan_delta_eff", &c.tan_delta_eff},
                                                    {"c_mech", &c.c_mech},
                                                    {"c_cut", &c.c_cut},
                                                    {"p_max", &c.p_max},
                                                    {"c_leak", &c.c_leak}};
  for (auto& [k, dst] : fields) {
    auto it = j.find(k);
    if (it == j.end()) throw InputError(std::string("calibration is missing ") + k);
    *dst = number(*it, k);
  }
  opt(j, "provenance", [&](const Json& v) {
    require_object(v, "calibration.provenance");
    for (auto it = v.begin(); it != v.end(); ++it)
      c.provenance[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
  });
  opt(j, "warnings", [&](const Json& v) {
    if (!v.is_array()) throw InputError("calibration.warnings must be an array");
    for (const auto& w : v) c.warnings.push_back(w.is_string() ? w.get<std::string>() : w.dump());
  });
  return c;
}

RxDevice rx_from_json(const Json& j, const SheetSpec& spec) {
  require_object(j, "rx");
  reject_unknown(j, {"path", "height", "q_rx", "coil"}, "rx.");
  RxDevice rx;
  rx.coil = spec.coil;
  opt(j, "height", [&](const Json& v) { rx.height_mm = number(v, "rx.height"); });
  opt(j, "q_rx", [&](const Json& v) { rx.q_rx = number(v, "rx.q_rx"); });
  opt(j, "coil", [&](const Json& v) { rx.coil = coil_from(v, spec.coil); });
  auto it = j.find("path");
  if (it == j.end() || !it->is_array()) throw InputError("rx.path must be an array");
  for (const auto& p : *it) {
    require_object(p, "rx.path[]");
    reject_unknown(p, {"t", "x", "y"}, "rx.path[].");
    if (!p.contains("t") || !p.contains("x") || !p.contains("y"))
      throw InputError("rx.path entries need t, x and y");
    rx.path.push_back({number(p["t"], "t"), number(p["x"], "x"), number(p["y"], "y")});
  }
  return rx;
}

Policy policy_from_json(const Json& j) {
  require_object(j, "policy");
  reject_unknown(j, {"r_detect", "hysteresis", "k_max", "input_power"}, "policy.");
  Policy p;
  opt(j, "r_detect", [&](const Json& v) { p.r_detect_mm = number(v, "policy.r_detect"); });
  opt(j, "hysteresis", [&](const Json& v) { p.hysteresis = number(v, "policy.hysteresis"); });
  opt(j, "k_max", [&](const Json& v) { p.k_max = integer(v, "policy.k_max"); });
  opt(j, "input_power", [&](const Json& v) { p.input_power = number(v, "policy.input_power"); });
  return p;
}

Json to_json(const StepState& st) {
  Json det = Json::array(), act = Json::array();
  for (auto c : st.detected) det.push_back(coil_json(c));
  for (auto c : st.active) act.push_back(coil_json(c));
  return {{"detected", det}, {"active", act}, {"power", st.power}, {"total_power", st.total_power}};
}

Json to_json(const CoverageMap& m) {
  return {{"x0", m.x0_mm}, {"y0", m.y0_mm}, {"step", m.step_mm}, {"nx", m.nx}, {"ny", m.ny}, {"values", m.values}};
}

std::string coverage_csv(const CoverageMap& m) {
  std::ostringstream os;
  os << "x_mm,y_mm,power\n" << std::setprecision(10);
  for (int iy = 0; iy < m.ny; ++iy)
    for (int ix = 0; ix < m.nx; ++ix)
      os << m.x0_mm + ix * m.step_mm << ',' << m.y0_mm + iy * m.step_mm << ',' << m.at(ix, iy) << '\n';
  return os.str();
}

Json error_json(const std::string& kind, const std::string& message, const std::vector<Violation>& violations) {
  Json j{{"error", kind}, {"message", message}};
  if (!violations.empty()) {
    Json v = Json::array();
    for (const auto& x : violations) v.push_back({{"field", x.field}, {"message", x.message}});
    j["violations"] = v;
  }
  return j;
}

}  // namespace wpt::io
