#include "wpt/design_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wpt/em_model.hpp"
#include "wpt/mech_model.hpp"

namespace wpt {

std::vector<Length> default_thickness_grid() {
  std::vector<Length> g;
  for (std::int64_t um : {240, 360, 480, 960, 1440, 1920, 2400, 3600, 4800})
    g.push_back(Length::from_um(um));
  return g;
}

namespace {

void check_grid(const std::vector<Length>& grid) {
  for (auto t : grid)
    if (t < kMinChannelThickness || t > kMaxChannelThickness)
      throw ValidationError("sweep thickness " + format_mm(t.um()) +
                            " mm outside admissible [0.24, 4.8] mm");
}

SweepRow evaluate_row(const SheetSpec& spec, Length t, const Calibration& cal) {
  SweepRow row;
  row.thickness = t;
  auto coil = spec.coil;
  coil.xsec.thickness = t;
  row.bending_stiffness = bending_stiffness(spec, t, cal);
  row.cutting_force = cutting_force(spec, t, cal);
  row.injectable = injectability(coil.xsec, spec.materials, cal.p_max);
  row.leak_on_cut = leak_on_cut(coil.xsec, spec.materials, cal.c_leak);
  row.feasible = row.injectable && !row.leak_on_cut;
  if (row.injectable) {
    try {
      row.q_factor = q_factor(coil, spec.materials, spec.frequency, cal).q_factor;
    } catch (const DomainError&) {
      row.feasible = false;  // above self-resonance
    }
  }
  return row;
}

void sort_rows(std::vector<SweepRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.thickness < b.thickness; });
}

double q_with(const SheetSpec& spec, Length t, double tan_delta, double loss) {
  auto coil = spec.coil;
  coil.xsec.thickness = t;
  Calibration c;
  c.tan_delta_eff = tan_delta;
  c.loss_calibration = loss;
  return q_factor(coil, spec.materials, spec.frequency, c).q_factor;
}

}  // namespace

std::vector<SweepRow> sweep_thickness_serial(const SheetSpec& spec, const std::vector<Length>& grid,
                                             const Calibration& cal) {
  check_grid(grid);
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (auto t : grid) rows.push_back(evaluate_row(spec, t, cal));
  sort_rows(rows);
  return rows;
}

std::vector<SweepRow> sweep_thickness(const SheetSpec& spec, const std::vector<Length>& grid,
                                      const Calibration& cal) {
  check_grid(grid);
  std::vector<SweepRow> rows(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) rows[i] = evaluate_row(spec, grid[i], cal);
  sort_rows(rows);
  return rows;
}

Selection select_design(const std::vector<SweepRow>& table, const SelectOptions& opt, Length wall) {
  std::vector<const SweepRow*> feasible;
  for (const auto& r : table)
    if (r.feasible && r.q_factor) feasible.push_back(&r);
  if (feasible.empty()) throw DomainError("infeasible design space");
  std::stable_sort(feasible.begin(), feasible.end(),
                   [](auto* a, auto* b) { return a->thickness < b->thickness; });

  double q_max = 0.0;
  for (auto* r : feasible) q_max = std::max(q_max, *r->q_factor);

  const SweepRow* pick = nullptr;
  Selection sel;
  sel.q_max = q_max;
  std::ostringstream why;
  if (opt.objective == Objective::max_q) {
    for (auto* r : feasible)
      if (*r->q_factor == q_max) {
        pick = r;
        break;
      }
    sel.rule = "max_q";
    why << "highest Q among " << feasible.size() << " feasible rows";
  } else {
    const double floor = (1.0 - opt.knee_tolerance) * q_max;
    for (auto* r : feasible)
      if (*r->q_factor >= floor) {
        pick = r;
        break;
      }
    sel.rule = "knee";
    why << "thinnest feasible channel with Q within " << opt.knee_tolerance * 100.0
        << "% of the best feasible Q (" << q_max << "); thinner channels bend and cut more easily"
        << " (knee rule is a modelling choice, not a measured criterion)";
  }
  sel.thickness = pick->thickness;
  sel.sheet_thickness = pick->thickness + wall * 2;
  sel.q_factor = *pick->q_factor;
  sel.justification = why.str();
  return sel;
}

Calibration calibrate(const SheetSpec& spec, const Anchors& a) {
  Calibration cal;
  const auto fmt = [](Length t) { return format_mm(t.um()) + " mm"; };

  if (a.q_high_value) {
    const double target = *a.q_high_value / a.q_value;
    const auto ratio = [&](double tan_delta) {
      return q_with(spec, a.q_high_thickness, tan_delta, 1.0) / q_with(spec, a.q_thickness, tan_delta, 1.0);
    };
    // The ratio falls monotonically from r_ac(ref)/r_ac(high) towards C(ref)/C(high).
    double lo = 0.0, hi = 10.0;
    const double r_lo = ratio(lo), r_hi = ratio(hi);
    if (!(target <= r_lo && target >= r_hi))
      throw DomainError("calibration failed: anchor Q(" + fmt(a.q_high_thickness) +
                        ") not bracketed by tan_delta_eff in [0, 10]");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (ratio(mid) > target ? lo : hi) = mid;
    }
    cal.tan_delta_eff = 0.5 * (lo + hi);
    cal.provenance["tan_delta_eff"] =
        "bisection on Q(" + fmt(a.q_high_thickness) + ")/Q(" + fmt(a.q_thickness) + ")";
  } else {
    cal.tan_delta_eff = kDefaultTanDeltaEff;
    cal.warnings.push_back("Q(4.8 mm) band anchor missing; tan_delta_eff set to default 0.02");
    cal.provenance["tan_delta_eff"] = "default 0.02 (no high-thickness Q anchor)";
  }

  const double q_raw = q_with(spec, a.q_thickness, cal.tan_delta_eff, 1.0);
  if (!(a.q_value > 0.0)) throw DomainError("calibration failed: anchor Q(" + fmt(a.q_thickness) + ") must be > 0");
  cal.loss_calibration = q_raw / a.q_value;
  cal.provenance["loss_calibration"] = "Q(" + fmt(a.q_thickness) + ") anchor";

  const Length t_ei = a.ei_sheet_thickness - spec.coil.xsec.wall * 2;
  const double ei_raw = bending_stiffness_uncalibrated(spec, t_ei);
  if (!(ei_raw > 0.0)) throw DomainError("calibration failed: anchor EI(" + fmt(a.ei_sheet_thickness) + ")");
  cal.c_mech = a.ei_value / ei_raw;
  cal.provenance["c_mech"] = "EI at sheet " + fmt(a.ei_sheet_thickness);

  cal.c_cut = 1.0;
  cal.provenance["c_cut"] = "unit scale (trend only)";

  auto xs = spec.coil.xsec;
  xs.thickness = a.t_inject;
  cal.p_max = injection_pressure(xs, spec.materials);
  cal.provenance["p_max"] = "injection threshold at " + fmt(a.t_inject);
  xs.thickness = a.t_leak;
  cal.c_leak = retention_ratio(xs, spec.materials);
  cal.provenance["c_leak"] = "leak threshold at " + fmt(a.t_leak);
  return cal;
}

const Calibration& default_calibration() {
  static const Calibration cal = calibrate(prototype_sheet());
  return cal;
}

}  // namespace wpt
