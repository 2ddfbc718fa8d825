#pragma once

#include <set>
#include <vector>

#include "wpt/calibration.hpp"
#include "wpt/arrangement.hpp"
#include "wpt/htree.hpp"

namespace wpt {

struct CutPolyline {
  std::vector<PointUm> points;
  bool closed = false;
};

struct CutScenario {
  std::vector<CutPolyline> cuts;
};

/// Throws ValidationError for short or self-intersecting polylines, open
/// polylines ending inside the sheet, or coordinates past kCoordLimit.
void validate_scenario(const SheetSpec& spec, const CutScenario& scenario);

struct SeveredSegment {
  int segment_id = 0;
  geom::PointD cut_point;  // um, first crossing along the segment from its root end
};

struct SeveredCoil {
  CoilIndex coil;
  int crossings = 0;                  // cut crossings of the spiral centerline
  std::vector<geom::PointD> points;  // um
};

struct CutReport {
  geom::Arrangement::Boundary retained_outline;  // um
  std::set<CoilIndex> surviving_coils;
  std::vector<SeveredSegment> severed_segments;
  std::vector<SeveredCoil> severed_coil_channels;  // every coil whose footprint a cut touches
  bool leak_risk = false;
  bool root_severed = false;
};

/// Survival needs an untouched closed coil footprint, an untouched feed path
/// and both connected to the root through the sheet minus the cuts.
CutReport apply_cuts(const SheetSpec& spec, const RoutingTree& tree, const CutScenario& scenario,
                     const Calibration& cal);

struct SealEntry {
  geom::PointD location;  // um
  double area_mm2 = 0.0;
  bool feed = false;      // H-tree stub rather than a coil turn
};

/// One entry per severed feed segment and per spiral crossing.
std::vector<SealEntry> sealing_manifest(const CutReport& report, const ChannelXSection& xsec);

/// Closed footprint box of a coil, um.
std::pair<PointUm, PointUm> coil_footprint(const SheetSpec& spec, CoilIndex idx);

}  // namespace wpt
