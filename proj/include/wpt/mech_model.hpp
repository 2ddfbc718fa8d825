#pragma once

#include <vector>

#include "wpt/calibration.hpp"
#include "wpt/core_model.hpp"

namespace wpt {

/// Composite-beam EI of one pitch-wide strip cut across a coil cell, before
/// the compliance factor. PVA skins and webs carry load; the 2 * turns
/// liquid-metal cores crossing the strip carry none. N*m^2.
double bending_stiffness_uncalibrated(const SheetSpec& spec, Length thickness);

/// c_mech * uncalibrated EI. Throws ValidationError outside [0.24, 4.8] mm.
double bending_stiffness(const SheetSpec& spec, Length thickness, const Calibration& cal);

/// c_cut * shear strength * solid PVA area along a cut across one strip. N.
double cutting_force(const SheetSpec& spec, Length thickness, const Calibration& cal);

/// Young-Laplace entry pressure 2 gamma (1/w + 1/t), Pa.
double injection_pressure(const ChannelXSection& xsec, const MaterialDb& materials);

bool injectability(const ChannelXSection& xsec, const MaterialDb& materials, double p_max);

/// Capillary pressure over hydrostatic head rho g t. Retention holds while
/// this stays at or above c_leak.
double retention_ratio(const ChannelXSection& xsec, const MaterialDb& materials);

bool leak_on_cut(const ChannelXSection& xsec, const MaterialDb& materials, double c_leak);

struct MechReport {
  double bending_stiffness = 0.0;
  double cutting_force_index = 0.0;
  double injection_pressure = 0.0;
  double retention_ratio = 0.0;
  bool injectable = false;
  bool leak_on_cut = false;
  bool feasible = false;
};

MechReport mech_report(const SheetSpec& spec, const Calibration& cal);

/// Grid used for the window search, um.
inline constexpr std::int64_t kThicknessGridStepUm = 10;

struct FeasibleWindow {
  bool feasible = false;
  Length t_min;
  Length t_max;
};

/// Feasible channel thickness interval on the 10 um admissible grid. Width
/// and materials come from `spec`; thickness is swept.
FeasibleWindow feasible_window(const SheetSpec& spec, const Calibration& cal);

struct DurabilityPoint {
  int cycle = 0;
  double bending_stiffness = 0.0;
  double resistance = 0.0;
};

/// Bending-cycle report. Stiffness and resistance are cycle-invariant in the
/// model, so every row repeats the cycle-0 values.
std::vector<DurabilityPoint> durability_report(const SheetSpec& spec, const Calibration& cal,
                                               int cycles, double sheet_resistance = 7.6e-3);

}  // namespace wpt
