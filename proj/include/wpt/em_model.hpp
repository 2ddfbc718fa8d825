#pragma once

#include <vector>

#include "wpt/calibration.hpp"
#include "wpt/core_model.hpp"
#include "wpt/kernels.hpp"

namespace wpt {

/// delta = sqrt(rho / (pi f mu0)), metres.
double skin_depth(const MaterialDb& materials, double frequency);

struct CoilResistance {
  double r_dc = 0.0;  // ohm
  double r_ac = 0.0;  // ohm
};

/// Annular-shell skin model over the rectangular channel section.
CoilResistance coil_resistance(const CoilSpec& coil, const MaterialDb& materials, double frequency);

/// Current-sheet approximation for square planar spirals (K1 = 2.34,
/// K2 = 2.75) on centerline outer/inner diameters. Henry.
double coil_inductance(const CoilSpec& coil);

/// Adjacent-turn sidewall parallel-plate capacitance summed over the n-1
/// gaps. Farad.
double stray_capacitance(const CoilSpec& coil, const MaterialDb& materials);

double self_resonance(double inductance, double capacitance);

struct ElectricalReport {
  double r_dc = 0.0;
  double r_ac = 0.0;
  double skin_depth = 0.0;
  double inductance = 0.0;
  double stray_capacitance = 0.0;
  double f_self_resonance = 0.0;
  double r_dielectric = 0.0;
  double q_factor = 0.0;
  double loss_calibration = 1.0;
};

/// Q = wL / (loss_calibration * (r_ac + tan_delta_eff * w^3 L^2 C)).
/// Throws DomainError at or above self-resonance.
ElectricalReport q_factor(const CoilSpec& coil, const MaterialDb& materials, double frequency,
                          const Calibration& cal);

/// Coil centre position; coils stay parallel to the sheet plane.
struct CoilPose {
  double x_mm = 0.0;
  double y_mm = 0.0;
  double z_mm = 0.0;
};

/// Spiral centerline as straight filaments (metres) at the given pose.
std::vector<kernels::Filament> coil_filaments(const CoilSpec& coil, const CoilPose& pose);

struct MutualOptions {
  int initial_pieces_per_side = 2;  // the kernel is exact per piece; refinement only confirms
  double tolerance = 0.005;
  int max_refinements = 6;
  bool parallel = true;
};

struct MutualResult {
  double value = 0.0;          // H
  int pieces_per_side = 0;     // at convergence
  double last_change = 0.0;    // relative change of the final refinement
};

/// Neumann double line integral between two spiral centerlines, refined by
/// doubling the per-side subdivision until successive estimates agree.
MutualResult mutual_inductance(const CoilSpec& coil_a, const CoilPose& a, const CoilSpec& coil_b,
                               const CoilPose& b, const MutualOptions& opt = {});

inline MutualResult mutual_inductance(const CoilPose& a, const CoilPose& b, const CoilSpec& coil,
                                      const MutualOptions& opt = {}) {
  return mutual_inductance(coil, a, coil, b, opt);
}

/// Optimal-load two-coil efficiency k^2 Qt Qr / (1 + sqrt(1 + k^2 Qt Qr))^2.
double link_efficiency(double q_tx, double q_rx, double k_coupling);

struct CouplingReport {
  double mutual = 0.0;
  double k_coupling = 0.0;
  double link_efficiency = 0.0;
};

/// Throws DomainError if the computed coupling is not below 1 (conductors
/// too close for the filament model).
CouplingReport coupling(const CoilSpec& tx, const CoilPose& tx_pose, double q_tx, const CoilSpec& rx,
                        const CoilPose& rx_pose, double q_rx, const MutualOptions& opt = {});

}  // namespace wpt
