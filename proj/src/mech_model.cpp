#include "wpt/mech_model.hpp"

namespace wpt {

namespace {

void check_thickness(Length t) {
  if (t < kMinChannelThickness || t > kMaxChannelThickness)
    throw ValidationError("thickness " + format_mm(t.um()) + " mm outside admissible [0.24, 4.8] mm");
}

struct Section {
  double b, skin, t, w;
  int cores;
};

Section section(const SheetSpec& spec, Length thickness) {
  return {spec.pitch.meters(), spec.coil.xsec.wall.meters(), thickness.meters(),
          spec.coil.xsec.width.meters(), 2 * spec.coil.turns};
}

}  // namespace

double bending_stiffness_uncalibrated(const SheetSpec& spec, Length thickness) {
  check_thickness(thickness);
  const auto s = section(spec, thickness);
  const double total = s.t + 2.0 * s.skin;
  // Cores sit on the neutral axis, so their removed second moment is w t^3 / 12 each.
  const double i_solid = s.b * total * total * total / 12.0;
  const double i_cores = s.cores * s.w * s.t * s.t * s.t / 12.0;
  return spec.materials.pva_youngs_modulus * (i_solid - i_cores);
}

double bending_stiffness(const SheetSpec& spec, Length thickness, const Calibration& cal) {
  return cal.c_mech * bending_stiffness_uncalibrated(spec, thickness);
}

double cutting_force(const SheetSpec& spec, Length thickness, const Calibration& cal) {
  check_thickness(thickness);
  const auto s = section(spec, thickness);
  const double solid = s.b * (s.t + 2.0 * s.skin) - s.cores * s.w * s.t;
  return cal.c_cut * spec.materials.pva_shear_strength * solid;
}

double injection_pressure(const ChannelXSection& xsec, const MaterialDb& m) {
  return 2.0 * m.lm_surface_tension * (1.0 / xsec.width.meters() + 1.0 / xsec.thickness.meters());
}

bool injectability(const ChannelXSection& xsec, const MaterialDb& m, double p_max) {
  return injection_pressure(xsec, m) <= p_max;
}

double retention_ratio(const ChannelXSection& xsec, const MaterialDb& m) {
  const double head = m.lm_density * constants::gravity * xsec.thickness.meters();
  return injection_pressure(xsec, m) / head;
}

bool leak_on_cut(const ChannelXSection& xsec, const MaterialDb& m, double c_leak) {
  return !(retention_ratio(xsec, m) >= c_leak);
}

MechReport mech_report(const SheetSpec& spec, const Calibration& cal) {
  MechReport r;
  const auto& x = spec.coil.xsec;
  r.bending_stiffness = bending_stiffness(spec, x.thickness, cal);
  r.cutting_force_index = cutting_force(spec, x.thickness, cal);
  r.injection_pressure = injection_pressure(x, spec.materials);
  r.retention_ratio = retention_ratio(x, spec.materials);
  r.injectable = injectability(x, spec.materials, cal.p_max);
  r.leak_on_cut = leak_on_cut(x, spec.materials, cal.c_leak);
  r.feasible = r.injectable && !r.leak_on_cut;
  return r;
}

FeasibleWindow feasible_window(const SheetSpec& spec, const Calibration& cal) {
  FeasibleWindow win;
  auto xsec = spec.coil.xsec;
  for (std::int64_t um = kMinChannelThickness.um(); um <= kMaxChannelThickness.um();
       um += kThicknessGridStepUm) {
    xsec.thickness = Length::from_um(um);
    if (!injectability(xsec, spec.materials, cal.p_max) || leak_on_cut(xsec, spec.materials, cal.c_leak))
      continue;
    if (!win.feasible) win.t_min = xsec.thickness;
    win.t_max = xsec.thickness;
    win.feasible = true;
  }
  return win;
}

std::vector<DurabilityPoint> durability_report(const SheetSpec& spec, const Calibration& cal, int cycles,
                                               double sheet_resistance) {
  if (cycles < 0) throw ValidationError("cycles must be >= 0");
  const double ei = bending_stiffness(spec, spec.coil.xsec.thickness, cal);
  std::vector<DurabilityPoint> out;
  out.reserve(static_cast<std::size_t>(cycles) + 1);
  for (int c = 0; c <= cycles; ++c) out.push_back({c, ei, sheet_resistance});
  return out;
}

}  // namespace wpt
