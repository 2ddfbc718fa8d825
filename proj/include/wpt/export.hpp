#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "wpt/cut_engine.hpp"

namespace wpt::exporter {

struct Triangle {
  std::array<float, 3> normal;
  std::array<std::array<float, 3>, 3> v;  // mm
};

using Mesh = std::vector<Triangle>;

/// Axis-aligned channel rectangles of the coil layer, um. Spirals plus the
/// H-tree feeds; leaf arms stop at the coil footprint edge.
struct Rect {
  double x0, y0, x1, y1;
};
std::vector<Rect> channel_rects(const SheetSpec& spec, const RoutingTree& tree);

/// PVA body with coil-layer channel voids, built as the boundary of a
/// rectilinear cell complex so the surface is closed and every edge is
/// shared by exactly two triangles. Z = 0 is the bottom skin.
Mesh body_mesh(const SheetSpec& spec, const RoutingTree& tree);

/// Retained region only. Cells are kept when their centre lies in the root
/// region. Axis-aligned cuts are exact; oblique cut pieces are resolved on a
/// 0.5 mm lattice over their bounding box and come out stair-stepped.
Mesh body_mesh_post_cut(const SheetSpec& spec, const RoutingTree& tree, const CutScenario& scenario);

std::string stl_binary(const Mesh& mesh, const std::string& header = "wptsheet body");

/// One layer per file, mm user units, channel centerlines stroked at the
/// channel width. `report`/`scenario` restrict the drawing to the retained
/// sheet and add seal caps.
std::string layer_svg(const SheetSpec& spec, const RoutingTree& tree, LayerRole role);
std::string layer_svg_post_cut(const SheetSpec& spec, const RoutingTree& tree, const CutScenario& scenario,
                               const CutReport& report, LayerRole role);

/// Print advisory metadata (nozzle, layer height, infill); not toolpaths.
nlohmann::json fab_sidecar(const SheetSpec& spec);

}  // namespace wpt::exporter
