#include "wpt/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace wpt {

std::string format_mm(std::int64_t um) {
  const bool neg = um < 0;
  const std::uint64_t mag = neg ? static_cast<std::uint64_t>(-(um + 1)) + 1
                                : static_cast<std::uint64_t>(um);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%llu.%03llu", neg ? "-" : "",
                static_cast<unsigned long long>(mag / 1000),
                static_cast<unsigned long long>(mag % 1000));
  return buf;
}

std::string to_string(LayerRole role) {
  switch (role) {
    case LayerRole::coil:
      return "coil";
    case LayerRole::ground_shield:
      return "ground_shield";
    case LayerRole::control:
      return "control";
  }
  return "unknown";
}

LayerRole layer_role_from_string(const std::string& name) {
  if (name == "coil") return LayerRole::coil;
  if (name == "ground_shield") return LayerRole::ground_shield;
  if (name == "control") return LayerRole::control;
  throw InputError("unknown layer role '" + name + "'");
}

SheetSpec prototype_sheet() { return SheetSpec{}; }

PointUm coil_center(const SheetSpec& spec, CoilIndex idx) {
  const std::int64_t n = spec.grid_size();
  const std::int64_t half_pitch = spec.pitch.um() / 2;
  return {(2 * idx.col - (n - 1)) * half_pitch, (2 * idx.row - (n - 1)) * half_pitch};
}

Length coil_turn_side(const CoilSpec& coil, int turn) {
  const auto& x = coil.xsec;
  return coil.outer_side - x.width - 2 * turn * (x.width + x.spacing);
}

Length coil_inner_opening(const CoilSpec& coil) {
  const auto& x = coil.xsec;
  return coil.outer_side - 2 * (coil.turns - 1) * (x.width + x.spacing) - 2 * x.width;
}

Length coil_conductor_length(const CoilSpec& coil) {
  if (coil.turns < 1) throw ValidationError("coil.turns must be >= 1");
  if (coil.xsec.width.um() <= 0 || coil.xsec.spacing.um() <= 0)
    throw ValidationError("channel width and spacing must be > 0");
  if (coil_inner_opening(coil).um() <= 0)
    throw ValidationError("coil inner opening is not positive");
  Length total;
  for (int i = 0; i < coil.turns; ++i) total += 4 * coil_turn_side(coil, i);
  return total;
}

std::vector<PointUm> spiral_centerline(const CoilSpec& coil, PointUm c) {
  coil_conductor_length(coil);  // validates
  const std::int64_t step = (coil.xsec.width + coil.xsec.spacing).um();
  std::vector<std::int64_t> half(coil.turns);
  for (int i = 0; i < coil.turns; ++i) half[i] = coil_turn_side(coil, i).um() / 2;

  std::vector<PointUm> pts;
  pts.push_back({c.x - half[0], c.y - half[0]});
  for (int i = 0; i < coil.turns; ++i) {
    const std::int64_t h = half[i];
    pts.push_back({c.x + h, c.y - h});
    pts.push_back({c.x + h, c.y + h});
    pts.push_back({c.x - h, c.y + h});
    if (i + 1 < coil.turns) {
      // Left side stops one turn pitch short, then jogs inward along the
      // next turn's bottom side (collinear, so the jog vertex is skipped).
      const std::int64_t hn = half[i + 1];
      pts.push_back({c.x - h, c.y - hn});
    } else {
      pts.push_back({c.x - h, c.y - h + step});
    }
  }
  return pts;
}

Length sheet_thickness(const ChannelXSection& xsec) { return xsec.thickness + 2 * xsec.wall; }

RecycleLedger recycle_project(double initial_mass_g, int cycles, const MaterialDb& m) {
  if (!(initial_mass_g > 0.0)) throw ValidationError("initial_mass must be > 0");
  if (cycles < 0) throw ValidationError("cycles must be >= 0");
  const double r = m.recovery_fraction_per_cycle;
  if (!(r > 0.0 && r <= 1.0))
    throw ValidationError("recovery_fraction_per_cycle must lie in (0, 1]");

  RecycleLedger ledger;
  ledger.cycle_records.push_back(
      {0, initial_mass_g, initial_mass_g, m.lm_resistivity, m.contact_resistance_per_joint});
  double mass = initial_mass_g;
  for (int n = 1; n <= cycles; ++n) {
    const double recovered = initial_mass_g * std::pow(r, n);
    ledger.cycle_records.push_back(
        {n, mass, recovered, m.lm_resistivity, m.contact_resistance_per_joint});
    mass = recovered;
  }
  return ledger;
}

namespace {

void check_positive(std::vector<Violation>& out, const std::string& field, Length v) {
  if (v.um() <= 0) out.push_back({field, field + " must be > 0 (got " + format_mm(v.um()) + " mm)"});
}

void check_positive(std::vector<Violation>& out, const std::string& field, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << field << " must be > 0 (got " << v << ")";
    out.push_back({field, os.str()});
  }
}

}  // namespace

std::vector<Violation> validate_sheet(const SheetSpec& s) {
  std::vector<Violation> out;
  const auto& x = s.coil.xsec;

  if (s.grid_order < 1 || s.grid_order > 6)
    out.push_back({"grid_order", "grid_order must lie in [1, 6] (got " +
                                     std::to_string(s.grid_order) + ")"});

  const bool pitch_ok = s.pitch.um() > 0;
  check_positive(out, "pitch", s.pitch);
  if (pitch_ok && s.pitch.um() % 2 != 0)
    out.push_back({"pitch", "pitch must be a whole multiple of 2 um so coil centres land on the um grid"});

  const bool width_ok = x.width.um() > 0;
  const bool spacing_ok = x.spacing.um() > 0;
  const bool outer_ok = s.coil.outer_side.um() > 0;
  const bool turns_ok = s.coil.turns >= 1;
  check_positive(out, "coil.xsec.width", x.width);
  check_positive(out, "coil.xsec.spacing", x.spacing);
  check_positive(out, "coil.xsec.wall", x.wall);
  check_positive(out, "coil.outer_side", s.coil.outer_side);
  if (!turns_ok)
    out.push_back({"coil.turns", "coil.turns must be >= 1 (got " + std::to_string(s.coil.turns) + ")"});

  if (x.thickness < kMinChannelThickness)
    out.push_back({"coil.xsec.thickness", "thickness below admissible 0.24 mm"});
  else if (x.thickness > kMaxChannelThickness)
    out.push_back({"coil.xsec.thickness", "thickness above admissible 4.8 mm"});

  if (width_ok && spacing_ok && outer_ok && turns_ok) {
    const Length opening = coil_inner_opening(s.coil);
    if (opening.um() <= 0)
      out.push_back({"coil.inner_opening", "coil inner opening " + format_mm(opening.um()) +
                                       " mm must be > 0 (outer_side - 2*(turns-1)*(width+spacing) - 2*width)"});
  }

  if (pitch_ok && outer_ok && s.pitch < s.coil.outer_side)
    out.push_back({"pitch", "pitch " + format_mm(s.pitch.um()) + " mm is below coil.outer_side; coils would overlap"});

  const auto& m = s.materials;
  check_positive(out, "materials.lm_resistivity", m.lm_resistivity);
  check_positive(out, "materials.lm_density", m.lm_density);
  check_positive(out, "materials.lm_surface_tension", m.lm_surface_tension);
  check_positive(out, "materials.pva_youngs_modulus", m.pva_youngs_modulus);
  check_positive(out, "materials.pva_relative_permittivity", m.pva_relative_permittivity);
  check_positive(out, "materials.pva_shear_strength", m.pva_shear_strength);
  if (!(m.contact_resistance_per_joint >= 0.0))
    out.push_back({"materials.contact_resistance_per_joint", "contact_resistance_per_joint must be >= 0"});
  if (!(m.recovery_fraction_per_cycle > 0.0 && m.recovery_fraction_per_cycle <= 1.0))
    out.push_back({"materials.recovery_fraction_per_cycle", "recovery_fraction_per_cycle must lie in (0, 1]"});

  check_positive(out, "frequency", s.frequency);

  std::set<LayerRole> roles(s.layers.begin(), s.layers.end());
  if (s.layers.size() != 3 || roles.size() != 3)
    out.push_back({"layers", "layers must list coil, ground_shield and control exactly once each"});

  return out;
}

std::vector<std::string> layout_warnings(const SheetSpec& s) {
  std::vector<std::string> w;
  const auto& x = s.coil.xsec;
  const Length needed = s.coil.outer_side + 2 * (x.width + x.spacing);
  if (s.pitch < needed)
    w.push_back("pitch " + format_mm(s.pitch.um()) + " mm leaves no routing margin; feed channels need pitch >= " +
                format_mm(needed.um()) + " mm to clear coil footprints");
  return w;
}

void require_valid(const SheetSpec& spec) {
  const auto v = validate_sheet(spec);
  if (v.empty()) return;
  std::string msg = "invalid sheet spec:";
  for (const auto& e : v) msg += "\n  " + e.message;
  throw ValidationError(msg);
}

}  // namespace wpt
