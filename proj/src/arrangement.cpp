#include "wpt/arrangement.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace wpt::geom {

namespace {

struct Frac {
  i128 num = 0;
  i128 den = 1;
};

bool frac_less(const Frac& a, const Frac& b) { return a.num * b.den < b.num * a.den; }

RationalPoint point_at(const Segment& s, const Frac& t) {
  const i128 rx = s.b.x - s.a.x;
  const i128 ry = s.b.y - s.a.y;
  return make_rational(i128{s.a.x} * t.den + t.num * rx, i128{s.a.y} * t.den + t.num * ry, t.den);
}

// Counter-clockwise order starting at +x.
bool angle_less(PointUm a, PointUm b) {
  const auto half = [](PointUm v) { return (v.y < 0 || (v.y == 0 && v.x < 0)) ? 1 : 0; };
  const int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return i128{a.x} * b.y - i128{a.y} * b.x > 0;
}

bool rational_lex_less(const RationalPoint& a, const RationalPoint& b) {
  const i128 ax = a.x * b.d, bx = b.x * a.d;
  if (ax != bx) return ax < bx;
  return a.y * b.d < b.y * a.d;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Arrangement::Arrangement(std::vector<Segment> segments) {
  for (const auto& s : segments) {
    for (const PointUm& p : {s.a, s.b})
      if (p.x < -kCoordLimit || p.x > kCoordLimit || p.y < -kCoordLimit || p.y > kCoordLimit)
        throw InputError("geometry coordinate outside the supported +-10 m range");
    if (!(s.a == s.b)) segments_.push_back(s);
  }
  const int n = static_cast<int>(segments_.size());
  DisjointSets sets(segments_.size());

  std::vector<std::vector<std::pair<Frac, RationalPoint>>> on_seg(segments_.size());
  for (int i = 0; i < n; ++i) {
    on_seg[i].push_back({{0, 1}, make_rational(segments_[i].a)});
    on_seg[i].push_back({{1, 1}, make_rational(segments_[i].b)});
  }

  for (int i = 0; i < n; ++i) {
    const Segment& si = segments_[i];
    const i128 rx = si.b.x - si.a.x, ry = si.b.y - si.a.y;
    for (int j = i + 1; j < n; ++j) {
      const Segment& sj = segments_[j];
      if (!segments_intersect(si, sj)) continue;
      sets.unite(i, j);
      const i128 sx = sj.b.x - sj.a.x, sy = sj.b.y - sj.a.y;
      const i128 qx = sj.a.x - si.a.x, qy = sj.a.y - si.a.y;
      i128 den = rx * sy - ry * sx;
      if (den != 0) {
        i128 tn = qx * sy - qy * sx;
        i128 un = qx * ry - qy * rx;
        if (den < 0) {
          den = -den;
          tn = -tn;
          un = -un;
        }
        const Frac t{tn, den}, u{un, den};
        const RationalPoint p = point_at(si, t);
        on_seg[i].push_back({t, p});
        on_seg[j].push_back({u, p});
        continue;
      }
      const i128 rr = rx * rx + ry * ry;
      const i128 ss = sx * sx + sy * sy;
      for (const PointUm& e : {sj.a, sj.b})
        if (on_segment(e, si))
          on_seg[i].push_back({{(i128{e.x} - si.a.x) * rx + (i128{e.y} - si.a.y) * ry, rr}, make_rational(e)});
      for (const PointUm& e : {si.a, si.b})
        if (on_segment(e, sj))
          on_seg[j].push_back({{(i128{e.x} - sj.a.x) * sx + (i128{e.y} - sj.a.y) * sy, ss}, make_rational(e)});
    }
  }

  std::map<RationalPoint, int> vertex_ids;
  const auto vertex_id = [&](const RationalPoint& p) {
    const auto [it, inserted] = vertex_ids.emplace(p, static_cast<int>(vertices_.size()));
    if (inserted) vertices_.push_back({p, {}});
    return it->second;
  };

  std::map<std::pair<int, int>, int> edge_ids;
  for (int i = 0; i < n; ++i) {
    auto& pts = on_seg[i];
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return frac_less(a.first, b.first); });
    const PointUm dir{segments_[i].b.x - segments_[i].a.x, segments_[i].b.y - segments_[i].a.y};
    int prev = -1;
    for (const auto& [t, p] : pts) {
      const int v = vertex_id(p);
      if (prev >= 0 && prev != v) {
        const auto key = std::minmax(prev, v);
        if (edge_ids.emplace(key, static_cast<int>(half_edges_.size())).second) {
          half_edges_.push_back({prev, v, dir, i});
          half_edges_.push_back({v, prev, {-dir.x, -dir.y}, i});
        }
      }
      prev = v;
    }
  }

  const int h_count = static_cast<int>(half_edges_.size());
  for (int h = 0; h < h_count; ++h) vertices_[half_edges_[h].from].out.push_back(h);
  std::vector<int> slot(half_edges_.size());
  for (auto& v : vertices_) {
    std::sort(v.out.begin(), v.out.end(),
              [&](int a, int b) { return angle_less(half_edges_[a].dir, half_edges_[b].dir); });
    for (std::size_t k = 0; k < v.out.size(); ++k) slot[v.out[k]] = static_cast<int>(k);
  }
  // Face on the left: at the head vertex, turn to the clockwise neighbour of
  // the reverse edge.
  for (int h = 0; h < h_count; ++h) {
    const auto& out = vertices_[half_edges_[h].to].out;
    const int deg = static_cast<int>(out.size());
    half_edges_[h].next = out[(slot[twin(h)] - 1 + deg) % deg];
  }
  for (int h = 0; h < h_count; ++h) {
    if (half_edges_[h].face >= 0) continue;
    const int face = static_cast<int>(face_first_edge_.size());
    face_first_edge_.push_back(h);
    for (int e = h; half_edges_[e].face < 0; e = half_edges_[e].next) half_edges_[e].face = face;
  }

  std::map<int, int> comp_of_root;
  segment_component_.resize(segments_.size());
  for (int i = 0; i < n; ++i) {
    const int r = sets.find(i);
    const auto [it, inserted] = comp_of_root.emplace(r, static_cast<int>(components_.size()));
    if (inserted) components_.push_back({{}, -1, segments_[i].a});
    segment_component_[i] = it->second;
  }
  for (int h = 0; h < h_count; ++h)
    components_[segment_component_[half_edges_[h].segment]].half_edges.push_back(h);

  for (auto& c : components_) {
    int lowest = half_edges_[c.half_edges.front()].from;
    for (int h : c.half_edges)
      if (rational_lex_less(vertices_[half_edges_[h].from].p, vertices_[lowest].p))
        lowest = half_edges_[h].from;
    // The unbounded face is the wedge at the lowest vertex containing -x.
    const auto& out = vertices_[lowest].out;
    int pick = out.back();
    for (int h : out)
      if (angle_less(half_edges_[h].dir, PointUm{-1, 0})) pick = h;
    c.outer_face = half_edges_[pick].face;
  }
}

bool Arrangement::on_curve(PointUm p) const {
  return std::any_of(segments_.begin(), segments_.end(),
                     [&](const Segment& s) { return on_segment(p, s); });
}

int Arrangement::locate(int component, PointUm q) const {
  const auto above = [&](const RationalPoint& p) { return p.y > i128{q.y} * p.d; };
  int best = -1;
  i128 best_x = 0, best_d = 1;
  PointUm best_dir;
  for (int h : components_[component].half_edges) {
    if (h & 1) continue;
    const HalfEdge& e = half_edges_[h];
    const bool up_from = above(vertices_[e.from].p);
    const bool up_to = above(vertices_[e.to].p);
    if (up_from == up_to) continue;
    const Segment& s = segments_[e.segment];
    PointUm r{s.b.x - s.a.x, s.b.y - s.a.y};
    if (r.y < 0) r = {-r.x, -r.y};
    // Crossing of the (infinitesimally raised) ray y = q.y with the line.
    const i128 x_num = i128{s.a.x} * r.y + (i128{q.y} - s.a.y) * r.x;
    const i128 x_den = r.y;
    if (x_num <= i128{q.x} * x_den) continue;
    bool better = best < 0;
    if (!better) {
      const i128 lhs = x_num * best_d, rhs = best_x * x_den;
      better = lhs < rhs || (lhs == rhs && i128{r.x} * best_dir.y < i128{best_dir.x} * r.y);
    }
    if (better) {
      best = up_to ? h : twin(h);  // upward-directed copy; q lies on its left
      best_x = x_num;
      best_d = x_den;
      best_dir = r;
    }
  }
  return best < 0 ? components_[component].outer_face : half_edges_[best].face;
}

bool Arrangement::same_region(PointUm p, PointUm q) const {
  if (on_curve(p) || on_curve(q)) return false;
  for (int c = 0; c < static_cast<int>(components_.size()); ++c)
    if (locate(c, p) != locate(c, q)) return false;
  return true;
}

std::vector<PointD> Arrangement::face_cycle(int face) const {
  std::vector<PointD> pts;
  const int start = face_first_edge_[face];
  int e = start;
  do {
    pts.push_back(vertices_[half_edges_[e].from].p.to_double());
    e = half_edges_[e].next;
  } while (e != start);
  return pts;
}

Arrangement::Boundary Arrangement::region_boundary(PointUm p) const {
  Boundary b;
  if (on_curve(p)) return b;
  const int nc = static_cast<int>(components_.size());
  std::vector<int> face_of_p(nc);
  for (int c = 0; c < nc; ++c) face_of_p[c] = locate(c, p);

  for (int c = 0; c < nc; ++c) {
    bool adjacent = true;
    for (int o = 0; o < nc && adjacent; ++o)
      if (o != c && locate(o, components_[c].sample) != face_of_p[o]) adjacent = false;
    if (!adjacent) continue;
    if (face_of_p[c] != components_[c].outer_face)
      b.outer = face_cycle(face_of_p[c]);
    else
      b.holes.push_back(face_cycle(components_[c].outer_face));
  }
  return b;
}

}  // namespace wpt::geom
