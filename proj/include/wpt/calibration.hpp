#pragma once

#include <map>
#include <string>
#include <vector>

namespace wpt {

/// Fitted model constants shared by the EM and mechanical models.
struct Calibration {
  double loss_calibration = 1.0;  // multiplier on total series loss
  double tan_delta_eff = 0.02;    // series-equivalent stray-capacitance loss
  double c_mech = 1.0;            // bending-stiffness compliance factor
  double c_cut = 1.0;             // cutting-force scale
  double p_max = 0.0;             // Pa, maximum injection pressure
  double c_leak = 0.0;            // capillary retention threshold
  std::map<std::string, std::string> provenance;
  std::vector<std::string> warnings;
};

inline constexpr double kDefaultTanDeltaEff = 0.02;

}  // namespace wpt
