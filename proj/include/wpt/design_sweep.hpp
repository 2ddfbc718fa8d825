#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wpt/calibration.hpp"
#include "wpt/core_model.hpp"

namespace wpt {

struct SweepRow {
  Length thickness;
  std::optional<double> q_factor;  // empty when not injectable or above f_sr
  double bending_stiffness = 0.0;
  double cutting_force = 0.0;
  bool injectable = false;
  bool leak_on_cut = false;
  bool feasible = false;
};

std::vector<Length> default_thickness_grid();

/// One row per grid point, sorted by thickness. OpenMP over grid points.
std::vector<SweepRow> sweep_thickness(const SheetSpec& spec, const std::vector<Length>& grid,
                                      const Calibration& cal);

/// Single-threaded reference for sweep_thickness.
std::vector<SweepRow> sweep_thickness_serial(const SheetSpec& spec, const std::vector<Length>& grid,
                                             const Calibration& cal);

enum class Objective { knee, max_q };

struct SelectOptions {
  Objective objective = Objective::knee;
  double knee_tolerance = 0.10;  // fraction of the best feasible Q
};

struct Selection {
  Length thickness;
  Length sheet_thickness;
  double q_factor = 0.0;
  double q_max = 0.0;
  std::string rule;
  std::string justification;
};

/// Knee rule: the thinnest feasible row whose Q is within knee_tolerance of
/// the best feasible Q. Throws DomainError("infeasible design space").
Selection select_design(const std::vector<SweepRow>& table, const SelectOptions& opt,
                        Length wall);

struct Anchors {
  Length q_thickness = Length::from_um(1440);
  double q_value = 57.5;
  Length q_high_thickness = Length::from_um(4800);
  std::optional<double> q_high_value = 55.5;  // must lie in the 55..60 band
  Length ei_sheet_thickness = Length::from_um(2400);
  double ei_value = 2.54e-6;
  Length t_inject = Length::from_um(360);
  Length t_leak = Length::from_um(1920);
};

/// Fits tan_delta_eff by bisection on the Q(high)/Q(ref) ratio, then solves
/// loss_calibration, c_mech, p_max and c_leak in closed form so that each
/// anchor is reproduced on re-evaluation. Throws DomainError naming the
/// anchor when no root is bracketed.
Calibration calibrate(const SheetSpec& spec, const Anchors& anchors = {});

/// calibrate(prototype_sheet()).
const Calibration& default_calibration();

}  // namespace wpt
