#include "wpt/export.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

#include "wpt/arrangement.hpp"

namespace wpt::exporter {

namespace {

constexpr std::int64_t kModuleSideUm = 20000;  // central control board footprint
constexpr std::int64_t kSensorRadiusUm = 2000;
constexpr std::int64_t kPostCutLatticeHalfUm = 1000;  // 0.5 mm

std::string fmt(double um) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", um / 1000.0);
  return std::strcmp(buf, "-0.000") == 0 ? "0.000" : buf;
}

std::string fy(double um) { return fmt(-um); }  // SVG y grows downwards

// Leaf arms end at the footprint edge; returns false when nothing is left.
bool clipped_feed(const SheetSpec& spec, const RoutingTree& tree, const TreeSegment& s, PointUm& a, PointUm& b) {
  a = tree.nodes[s.node_a].position;
  b = tree.nodes[s.node_b].position;
  for (const auto& [idx, node] : tree.leaves) {
    if (node != s.node_b) continue;
    const auto [lo, hi] = coil_footprint(spec, idx);
    if (geom::point_in_box(a, lo, hi)) return false;
    if (a.x == b.x) b.y = a.y < b.y ? lo.y : hi.y;
    else b.x = a.x < b.x ? lo.x : hi.x;
  }
  return true;
}

void add_rect(std::vector<Rect>& out, PointUm a, PointUm b, double half_w) {
  out.push_back({std::min(a.x, b.x) - half_w, std::min(a.y, b.y) - half_w, std::max(a.x, b.x) + half_w,
                 std::max(a.y, b.y) + half_w});
}

struct CellGrid {
  std::vector<std::int64_t> xs, ys;  // half-um breakpoints
  std::vector<double> zs;            // mm
};

std::int64_t half_um(double um) { return std::llround(um * 2.0); }

void push_quad(Mesh& m, std::array<float, 3> n, const std::array<std::array<float, 3>, 4>& q) {
  m.push_back({n, {q[0], q[1], q[2]}});
  m.push_back({n, {q[0], q[2], q[3]}});
}

Mesh mesh_cells(const CellGrid& g, const std::vector<char>& solid) {
  const int nx = static_cast<int>(g.xs.size()) - 1;
  const int ny = static_cast<int>(g.ys.size()) - 1;
  const int nz = static_cast<int>(g.zs.size()) - 1;
  const auto at = [&](int i, int j, int k) -> bool {
    if (i < 0 || j < 0 || k < 0 || i >= nx || j >= ny || k >= nz) return false;
    return solid[(static_cast<std::size_t>(k) * ny + j) * nx + i] != 0;
  };
  const auto X = [&](int i) { return static_cast<float>(g.xs[i] / 2000.0); };
  const auto Y = [&](int j) { return static_cast<float>(g.ys[j] / 2000.0); };
  const auto Z = [&](int k) { return static_cast<float>(g.zs[k]); };

  Mesh m;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (!at(i, j, k)) continue;
        const float x0 = X(i), x1 = X(i + 1), y0 = Y(j), y1 = Y(j + 1), z0 = Z(k), z1 = Z(k + 1);
        if (!at(i + 1, j, k)) push_quad(m, {1, 0, 0}, {{{x1, y0, z0}, {x1, y1, z0}, {x1, y1, z1}, {x1, y0, z1}}});
        if (!at(i - 1, j, k)) push_quad(m, {-1, 0, 0}, {{{x0, y0, z0}, {x0, y0, z1}, {x0, y1, z1}, {x0, y1, z0}}});
        if (!at(i, j + 1, k)) push_quad(m, {0, 1, 0}, {{{x0, y1, z0}, {x0, y1, z1}, {x1, y1, z1}, {x1, y1, z0}}});
        if (!at(i, j - 1, k)) push_quad(m, {0, -1, 0}, {{{x0, y0, z0}, {x1, y0, z0}, {x1, y0, z1}, {x0, y0, z1}}});
        if (!at(i, j, k + 1)) push_quad(m, {0, 0, 1}, {{{x0, y0, z1}, {x1, y0, z1}, {x1, y1, z1}, {x0, y1, z1}}});
        if (!at(i, j, k - 1)) push_quad(m, {0, 0, -1}, {{{x0, y0, z0}, {x0, y1, z0}, {x1, y1, z0}, {x1, y0, z0}}});
      }
  return m;
}

void unique_sorted(std::vector<std::int64_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// `keep(cx2, cy2)` receives the cell centre in half-um and decides whether
// the column belongs to the body.
template <class Keep>
Mesh build_body(const SheetSpec& spec, const RoutingTree& tree, const std::vector<std::int64_t>& extra_x,
                const std::vector<std::int64_t>& extra_y, Keep keep) {
  const auto rects = channel_rects(spec, tree);
  const std::int64_t h2 = spec.side().um();  // half side in half-um
  CellGrid g;
  g.xs = {-h2, h2};
  g.ys = {-h2, h2};
  for (const auto& r : rects) {
    for (double x : {r.x0, r.x1}) g.xs.push_back(std::clamp(half_um(x), -h2, h2));
    for (double y : {r.y0, r.y1}) g.ys.push_back(std::clamp(half_um(y), -h2, h2));
  }
  for (auto v : extra_x) g.xs.push_back(std::clamp(v, -h2, h2));
  for (auto v : extra_y) g.ys.push_back(std::clamp(v, -h2, h2));
  unique_sorted(g.xs);
  unique_sorted(g.ys);
  const auto& x = spec.coil.xsec;
  g.zs = {0.0, x.wall.mm(), (x.wall + x.thickness).mm(), (x.wall * 2 + x.thickness).mm()};

  const int nx = static_cast<int>(g.xs.size()) - 1, ny = static_cast<int>(g.ys.size()) - 1;
  std::vector<char> channel(static_cast<std::size_t>(nx) * ny, 0);
  for (const auto& r : rects) {
    const auto i0 = std::lower_bound(g.xs.begin(), g.xs.end(), std::clamp(half_um(r.x0), -h2, h2)) - g.xs.begin();
    const auto i1 = std::lower_bound(g.xs.begin(), g.xs.end(), std::clamp(half_um(r.x1), -h2, h2)) - g.xs.begin();
    const auto j0 = std::lower_bound(g.ys.begin(), g.ys.end(), std::clamp(half_um(r.y0), -h2, h2)) - g.ys.begin();
    const auto j1 = std::lower_bound(g.ys.begin(), g.ys.end(), std::clamp(half_um(r.y1), -h2, h2)) - g.ys.begin();
    for (auto j = j0; j < j1; ++j)
      for (auto i = i0; i < i1; ++i) channel[static_cast<std::size_t>(j) * nx + i] = 1;
  }
  std::vector<char> column(static_cast<std::size_t>(nx) * ny, 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      column[static_cast<std::size_t>(j) * nx + i] = keep(g.xs[i] + g.xs[i + 1], g.ys[j] + g.ys[j + 1]) ? 1 : 0;

  std::vector<char> solid(static_cast<std::size_t>(nx) * ny * 3, 0);
  for (int k = 0; k < 3; ++k)
    for (std::size_t c = 0; c < column.size(); ++c)
      solid[k * column.size() + c] = column[c] && !(k == 1 && channel[c]);
  return mesh_cells(g, solid);
}

// --- SVG -------------------------------------------------------------------

std::string svg_open(const SheetSpec& spec) {
  const double h = static_cast<double>(spec.side().um()) / 2.0;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(2 * h) << "mm\" height=\"" << fmt(2 * h)
     << "mm\" viewBox=\"" << fmt(-h) << ' ' << fmt(-h) << ' ' << fmt(2 * h) << ' ' << fmt(2 * h) << "\">\n";
  return os.str();
}

std::string path_d(const std::vector<PointUm>& pts) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i)
    d += (i == 0 ? "M " : " L ") + fmt(static_cast<double>(pts[i].x)) + ' ' + fy(static_cast<double>(pts[i].y));
  return d;
}

std::string ring_d(const std::vector<geom::PointD>& pts) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) d += (i == 0 ? "M " : " L ") + fmt(pts[i].x) + ' ' + fy(pts[i].y);
  return d + " Z";
}

struct SvgFilter {
  const std::set<CoilIndex>* coils = nullptr;  // null: all coils
  const CutReport* report = nullptr;
  const geom::Arrangement* arr = nullptr;
};

bool coil_drawn(const SvgFilter& f, CoilIndex c) { return !f.coils || f.coils->count(c); }

std::string layer_body(const SheetSpec& spec, const RoutingTree& tree, LayerRole role, const SvgFilter& f) {
  std::ostringstream os;
  const double h = static_cast<double>(spec.side().um()) / 2.0;
  const std::string w = fmt(static_cast<double>(spec.coil.xsec.width.um()));
  os << "<g id=\"outline\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.200\">\n";
  if (f.report) {
    const auto& b = f.report->retained_outline;
    if (!b.outer.empty()) {
      std::string d = ring_d(b.outer);
      for (const auto& hole : b.holes) d += ' ' + ring_d(hole);
      os << "<path fill-rule=\"evenodd\" d=\"" << d << "\"/>\n";
    }
  } else {
    os << "<rect x=\"" << fmt(-h) << "\" y=\"" << fmt(-h) << "\" width=\"" << fmt(2 * h) << "\" height=\""
       << fmt(2 * h) << "\"/>\n";
  }
  os << "</g>\n";

  const int n = spec.grid_size();
  if (role == LayerRole::coil) {
    os << "<g id=\"coils\" fill=\"none\" stroke=\"#b87333\" stroke-width=\"" << w
       << "\" stroke-linecap=\"square\" stroke-linejoin=\"miter\">\n";
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (coil_drawn(f, {r, c}))
          os << "<path id=\"coil-" << r << '-' << c << "\" d=\""
             << path_d(spiral_centerline(spec.coil, coil_center(spec, {r, c}))) << "\"/>\n";
    os << "</g>\n<g id=\"feeds\" fill=\"none\" stroke=\"#b87333\" stroke-width=\"" << w
       << "\" stroke-linecap=\"square\">\n";
    std::map<int, geom::PointD> cut_at;
    if (f.report)
      for (const auto& s : f.report->severed_segments) cut_at[s.segment_id] = s.cut_point;
    const PointUm root = tree.nodes[tree.root].position;
    for (const auto& s : tree.segments) {
      PointUm a, b;
      if (!clipped_feed(spec, tree, s, a, b)) continue;
      if (f.arr) {
        auto it = cut_at.find(s.id);
        if (it != cut_at.end()) {
          // Keep the stub on the retained side up to the seal.
          if (!f.arr->same_region(root, a)) continue;
          os << "<path id=\"feed-" << s.id << "\" d=\"M " << fmt(static_cast<double>(a.x)) << ' '
             << fy(static_cast<double>(a.y)) << " L " << fmt(it->second.x) << ' ' << fy(it->second.y) << "\"/>\n";
          continue;
        }
        if (!f.arr->same_region(root, a) || !f.arr->same_region(root, b)) continue;
      }
      os << "<path id=\"feed-" << s.id << "\" d=\"" << path_d({a, b}) << "\"/>\n";
    }
    os << "</g>\n";
    if (f.report) {
      os << "<g id=\"seals\" fill=\"#4a90d9\" stroke=\"none\">\n";
      const double half = static_cast<double>(spec.coil.xsec.width.um()) / 2.0;
      for (const auto& e : sealing_manifest(*f.report, spec.coil.xsec)) {
        if (!e.feed) continue;
        os << "<rect x=\"" << fmt(e.location.x - half) << "\" y=\"" << fy(e.location.y + half) << "\" width=\"" << w
           << "\" height=\"" << w << "\"/>\n";
      }
      os << "</g>\n";
    }
  } else if (role == LayerRole::ground_shield) {
    os << "<g id=\"shield\" fill=\"#cccccc\" stroke=\"none\">\n";
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        if (!coil_drawn(f, {r, c})) continue;
        const auto [lo, hi] = coil_footprint(spec, {r, c});
        os << "<rect id=\"shield-" << r << '-' << c << "\" x=\"" << fmt(static_cast<double>(lo.x)) << "\" y=\""
           << fy(static_cast<double>(hi.y)) << "\" width=\"" << fmt(static_cast<double>(hi.x - lo.x))
           << "\" height=\"" << fmt(static_cast<double>(hi.y - lo.y)) << "\"/>\n";
      }
    os << "</g>\n";
  } else {
    os << "<g id=\"control\" fill=\"none\" stroke=\"#2e7d32\" stroke-width=\"0.200\">\n";
    if (!f.report || !f.report->root_severed)
      os << "<rect id=\"module\" x=\"" << fmt(-kModuleSideUm / 2.0) << "\" y=\"" << fmt(-kModuleSideUm / 2.0)
         << "\" width=\"" << fmt(kModuleSideUm) << "\" height=\"" << fmt(kModuleSideUm) << "\"/>\n";
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        if (!coil_drawn(f, {r, c})) continue;
        const PointUm p = coil_center(spec, {r, c});
        os << "<circle id=\"hall-" << r << '-' << c << "\" cx=\"" << fmt(static_cast<double>(p.x)) << "\" cy=\""
           << fy(static_cast<double>(p.y)) << "\" r=\"" << fmt(kSensorRadiusUm) << "\"/>\n";
      }
    os << "</g>\n";
  }
  return os.str();
}

geom::Arrangement cut_arrangement(const SheetSpec& spec, const CutScenario& sc) {
  const std::int64_t h = spec.side().um() / 2;
  const PointUm a{-h, -h}, b{h, -h}, c{h, h}, d{-h, h};
  std::vector<geom::Segment> segs{{a, b}, {b, c}, {c, d}, {d, a}};
  for (const auto& cut : sc.cuts) {
    for (const auto& s : geom::polyline_segments(cut.points)) segs.push_back(s);
    if (cut.closed && cut.points.size() > 2) segs.push_back({cut.points.back(), cut.points.front()});
  }
  return geom::Arrangement(std::move(segs));
}

}  // namespace

std::vector<Rect> channel_rects(const SheetSpec& spec, const RoutingTree& tree) {
  const double half_w = static_cast<double>(spec.coil.xsec.width.um()) / 2.0;
  std::vector<Rect> out;
  const int n = spec.grid_size();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      for (const auto& s : geom::polyline_segments(spiral_centerline(spec.coil, coil_center(spec, {r, c}))))
        add_rect(out, s.a, s.b, half_w);
  for (const auto& s : tree.segments) {
    PointUm a, b;
    if (clipped_feed(spec, tree, s, a, b)) add_rect(out, a, b, half_w);
  }
  return out;
}

Mesh body_mesh(const SheetSpec& spec, const RoutingTree& tree) {
  return build_body(spec, tree, {}, {}, [](std::int64_t, std::int64_t) { return true; });
}

Mesh body_mesh_post_cut(const SheetSpec& spec, const RoutingTree& tree, const CutScenario& sc) {
  validate_scenario(spec, sc);
  const auto arr = cut_arrangement(spec, sc);
  const PointUm root = tree.nodes[tree.root].position;
  // Cut vertices become breakpoints; oblique pieces get the 0.5 mm lattice
  // over their bounding box so no cell straddles a cut.
  const std::int64_t h2 = spec.side().um();
  std::vector<std::int64_t> xs, ys;
  for (const auto& cut : sc.cuts) {
    auto segs = geom::polyline_segments(cut.points);
    if (cut.closed && cut.points.size() > 2) segs.push_back({cut.points.back(), cut.points.front()});
    for (const auto& s : segs) {
      for (auto p : {s.a, s.b}) {
        xs.push_back(2 * p.x);
        ys.push_back(2 * p.y);
      }
      if (s.a.x == s.b.x || s.a.y == s.b.y) continue;
      const auto lat = [](std::int64_t v) { return v - ((v % kPostCutLatticeHalfUm) + kPostCutLatticeHalfUm) % kPostCutLatticeHalfUm; };
      const auto span = [&](std::int64_t a, std::int64_t b, std::vector<std::int64_t>& out) {
        const std::int64_t lo = std::max(2 * std::min(a, b), -h2), hi = std::min(2 * std::max(a, b), h2);
        for (auto v = lat(lo); v <= hi; v += kPostCutLatticeHalfUm) out.push_back(v);
      };
      span(s.a.x, s.b.x, xs);
      span(s.a.y, s.b.y, ys);
    }
  }
  return build_body(spec, tree, xs, ys, [&](std::int64_t cx2, std::int64_t cy2) {
    // Centre in quarter-um; round to the um grid.
    const PointUm p{static_cast<std::int64_t>(std::llround(cx2 / 4.0)), static_cast<std::int64_t>(std::llround(cy2 / 4.0))};
    return arr.same_region(root, p);
  });
}

std::string stl_binary(const Mesh& mesh, const std::string& header) {
  std::string out(80, '\0');
  std::memcpy(out.data(), header.data(), std::min<std::size_t>(header.size(), 80));
  const auto put = [&](const void* p, std::size_t n) { out.append(static_cast<const char*>(p), n); };
  const std::uint32_t count = static_cast<std::uint32_t>(mesh.size());
  put(&count, 4);
  for (const auto& t : mesh) {
    put(t.normal.data(), 12);
    for (const auto& v : t.v) put(v.data(), 12);
    const std::uint16_t attr = 0;
    put(&attr, 2);
  }
  return out;
}

std::string layer_svg(const SheetSpec& spec, const RoutingTree& tree, LayerRole role) {
  return svg_open(spec) + "<g id=\"layer-" + to_string(role) + "\">\n" + layer_body(spec, tree, role, {}) +
         "</g>\n</svg>\n";
}

std::string layer_svg_post_cut(const SheetSpec& spec, const RoutingTree& tree, const CutScenario& sc,
                               const CutReport& report, LayerRole role) {
  const auto arr = cut_arrangement(spec, sc);
  SvgFilter f{&report.surviving_coils, &report, &arr};
  return svg_open(spec) + "<g id=\"layer-" + to_string(role) + "\">\n" + layer_body(spec, tree, role, f) +
         "</g>\n</svg>\n";
}

nlohmann::json fab_sidecar(const SheetSpec& spec) {
  const auto& x = spec.coil.xsec;
  return {{"format", "stl-binary"},
          {"units", "mm"},
          {"process", "FDM"},
          {"material", "PVA"},
          {"nozzle_mm", 0.4},
          {"layer_height_mm", 0.08},
          {"infill_percent", 100},
          {"channel_thickness_mm", x.thickness.mm()},
          {"wall_mm", x.wall.mm()},
          {"sheet_thickness_mm", sheet_thickness(x).mm()},
          {"note", "advisory print settings only; slicing is left to external tools"}};
}

}  // namespace wpt::exporter
