#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wpt/calibration.hpp"
#include "wpt/core_model.hpp"

namespace wpt {

struct PathPoint {
  double t = 0.0;     // s
  double x_mm = 0.0;
  double y_mm = 0.0;
};

struct RxDevice {
  std::vector<PathPoint> path;
  CoilSpec coil;
  double q_rx = 57.5;
  double height_mm = 5.0;
};

struct Policy {
  double r_detect_mm = 0.0;  // <= 0 selects pitch / 2
  double hysteresis = 0.05;  // detect_off once distance exceeds r (1 + hysteresis)
  int k_max = 1;
  double input_power = 1.0;
};

enum class EventKind { detect_on, detect_off, switch_on, switch_off, power_sample };
std::string to_string(EventKind k);

struct SimEvent {
  double t = 0.0;
  EventKind kind = EventKind::power_sample;
  std::optional<CoilIndex> coil;  // empty for an idle power sample
  double value = 0.0;
};

struct SimTrace {
  std::vector<SimEvent> events;
};

/// Fixed inputs shared by every step: surviving coils and the TX quality
/// factor of the sheet coil.
struct SimContext {
  SheetSpec spec;
  std::set<CoilIndex> surviving;
  double q_tx = 0.0;
};

SimContext make_context(const SheetSpec& spec, const std::set<CoilIndex>& surviving,
                        const Calibration& cal);

/// Delivered power for one TX coil driving the RX at (x, y). Always >= 0.
double delivered_power(const SimContext& ctx, const RxDevice& rx, const Policy& policy, CoilIndex tx,
                       double x_mm, double y_mm);

/// Time-stepped run. Per step: detect_*, switch_off, switch_on, then
/// power_sample events; coil events within a kind are ordered by (row, col)
/// except switch_on, which follows selection order.
SimTrace run_sim(const SimContext& ctx, const RxDevice& rx, const Policy& policy, double dt);

struct StepState {
  std::vector<CoilIndex> detected;  // (row, col) order
  std::vector<CoilIndex> active;    // selection order
  std::vector<double> power;        // per active coil
  double total_power = 0.0;
};

/// Memoryless evaluation of one RX pose (no hysteresis).
StepState step_state(const SimContext& ctx, const RxDevice& rx, const Policy& policy, double x_mm,
                     double y_mm);

struct CoverageMap {
  double x0_mm = 0.0;
  double y0_mm = 0.0;
  double step_mm = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major, y outer

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

/// Best delivered power over the active set with the RX centred on each
/// grid point of the sheet square. Mutual inductances are computed once per
/// distinct TX-RX offset, in parallel.
CoverageMap coverage_map(const SimContext& ctx, const RxDevice& rx, const Policy& policy,
                         double grid_step_mm);

/// Single-threaded, uncached reference.
CoverageMap coverage_map_serial(const SimContext& ctx, const RxDevice& rx, const Policy& policy,
                                double grid_step_mm);

/// One JSON object per line: {"coil":[r,c]|null,"kind":...,"t":...,"value":...}.
std::string to_ndjson(const SimTrace& trace);

}  // namespace wpt
