#include "wpt/cut_engine.hpp"

#include <cstdlib>
#include <string>

#include "wpt/mech_model.hpp"

namespace wpt {

using geom::Segment;

std::pair<PointUm, PointUm> coil_footprint(const SheetSpec& spec, CoilIndex idx) {
  const PointUm c = coil_center(spec, idx);
  const std::int64_t h = spec.coil.outer_side.um() / 2;
  return {{c.x - h, c.y - h}, {c.x + h, c.y + h}};
}

namespace {

std::vector<Segment> cut_segments(const CutScenario& sc) {
  std::vector<Segment> out;
  for (const auto& c : sc.cuts) {
    auto segs = geom::polyline_segments(c.points);
    out.insert(out.end(), segs.begin(), segs.end());
    if (c.closed && c.points.size() > 2) out.push_back({c.points.back(), c.points.front()});
  }
  return out;
}

std::vector<Segment> sheet_outline(const SheetSpec& spec) {
  const std::int64_t h = spec.side().um() / 2;
  const PointUm a{-h, -h}, b{h, -h}, c{h, h}, d{-h, h};
  return {{a, b}, {b, c}, {c, d}, {d, a}};
}

Segment tree_segment(const RoutingTree& tree, const TreeSegment& s) {
  return {tree.nodes[s.node_a].position, tree.nodes[s.node_b].position};
}

}  // namespace

void validate_scenario(const SheetSpec& spec, const CutScenario& sc) {
  const std::int64_t h = spec.side().um() / 2;
  for (std::size_t i = 0; i < sc.cuts.size(); ++i) {
    const auto& c = sc.cuts[i];
    const std::string tag = "cuts[" + std::to_string(i) + "]";
    if (c.points.size() < 2) throw ValidationError(tag + ": polyline needs at least 2 vertices");
    if (c.closed && c.points.size() < 3) throw ValidationError(tag + ": closed cut needs at least 3 vertices");
    for (const auto& p : c.points)
      if (std::llabs(p.x) > geom::kCoordLimit || std::llabs(p.y) > geom::kCoordLimit)
        throw ValidationError(tag + ": coordinate beyond 10 m");
    for (std::size_t k = 0; k + 1 < c.points.size(); ++k)
      if (c.points[k] == c.points[k + 1]) throw ValidationError(tag + ": repeated vertex");
    if (c.closed && c.points.front() == c.points.back())
      throw ValidationError(tag + ": closed cut repeats its first vertex");
    if (geom::polyline_self_intersects(c.points, c.closed))
      throw ValidationError(tag + ": cut polyline self-intersects");
    if (!c.closed) {
      for (const auto& p : {c.points.front(), c.points.back()})
        if (std::llabs(p.x) < h && std::llabs(p.y) < h)
          throw ValidationError(tag + ": open cut must start and end outside or on the sheet outline");
    }
  }
}

CutReport apply_cuts(const SheetSpec& spec, const RoutingTree& tree, const CutScenario& sc,
                     const Calibration& cal) {
  validate_scenario(spec, sc);
  const auto cuts = cut_segments(sc);

  auto all = sheet_outline(spec);
  all.insert(all.end(), cuts.begin(), cuts.end());
  const geom::Arrangement arr(std::move(all));

  CutReport rep;
  rep.leak_risk = leak_on_cut(spec.coil.xsec, spec.materials, cal.c_leak);

  const PointUm root = tree.nodes[tree.root].position;

  std::vector<bool> severed(tree.segments.size(), false);
  for (const auto& s : tree.segments) {
    const Segment ts = tree_segment(tree, s);
    std::optional<geom::PointD> first;
    double best = 0.0;
    for (const auto& c : cuts) {
      auto p = geom::first_intersection(ts, c);
      if (!p) continue;
      const double d = std::abs(p->x - ts.a.x) + std::abs(p->y - ts.a.y);
      if (!first || d < best) {
        first = p;
        best = d;
      }
    }
    if (first) {
      severed[s.id] = true;
      rep.severed_segments.push_back({s.id, *first});
    }
  }

  bool root_cut = arr.on_curve(root);
  bool all_incident_cut = true;
  bool any_incident = false;
  for (const auto& s : tree.segments)
    if (s.node_a == tree.root || s.node_b == tree.root) {
      any_incident = true;
      all_incident_cut = all_incident_cut && severed[s.id];
    }
  rep.root_severed = root_cut || (any_incident && all_incident_cut);

  const int n = spec.grid_size();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const CoilIndex idx{r, c};
      const auto [lo, hi] = coil_footprint(spec, idx);
      bool touched = false;
      for (const auto& cs : cuts)
        if (geom::segment_touches_box(cs, lo, hi)) {
          touched = true;
          break;
        }
      if (touched) {
        SeveredCoil sv{idx, 0, {}};
        const auto spiral = spiral_centerline(spec.coil, coil_center(spec, idx));
        for (const auto& seg : geom::polyline_segments(spiral))
          for (const auto& cs : cuts)
            for (const auto& p : geom::intersection_points(seg, cs)) {
              // A crossing through a spiral vertex is shared by two segments.
              const auto pd = p.to_double();
              bool dup = false;
              for (const auto& q : sv.points) dup = dup || (q.x == pd.x && q.y == pd.y);
              if (!dup) sv.points.push_back(pd);
            }
        sv.crossings = static_cast<int>(sv.points.size());
        rep.severed_coil_channels.push_back(std::move(sv));
      }
      if (rep.root_severed || touched) continue;

      bool alive = true;
      for (const auto& s : path_to_leaf(tree, idx)) {
        if (severed[s.id]) {
          alive = false;
          break;
        }
      }
      if (!alive) continue;
      const PointUm center = coil_center(spec, idx);
      if (!arr.same_region(root, center)) continue;
      rep.surviving_coils.insert(idx);
    }

  if (!rep.root_severed) rep.retained_outline = arr.region_boundary(root);
  return rep;
}

std::vector<SealEntry> sealing_manifest(const CutReport& rep, const ChannelXSection& xsec) {
  const double area = xsec.width.mm() * xsec.thickness.mm();
  std::vector<SealEntry> out;
  for (const auto& s : rep.severed_segments) out.push_back({s.cut_point, area, true});
  for (const auto& c : rep.severed_coil_channels)
    for (const auto& p : c.points) out.push_back({p, area, false});
  return out;
}

}  // namespace wpt
