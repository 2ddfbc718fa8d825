#include "wpt/geometry.hpp"

#include <algorithm>
#include <utility>

namespace wpt::geom {

namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Frac {
  i128 num = 0;
  i128 den = 1;  // > 0
};

bool frac_less(const Frac& a, const Frac& b) { return a.num * b.den < b.num * a.den; }

RationalPoint point_at(const Segment& s, const Frac& t) {
  const i128 rx = s.b.x - s.a.x;
  const i128 ry = s.b.y - s.a.y;
  return make_rational(i128{s.a.x} * t.den + t.num * rx, i128{s.a.y} * t.den + t.num * ry, t.den);
}

}  // namespace

RationalPoint make_rational(i128 x, i128 y, i128 d) {
  if (d < 0) {
    x = -x;
    y = -y;
    d = -d;
  }
  i128 g = gcd128(gcd128(x, y), d);
  if (g > 1) {
    x /= g;
    y /= g;
    d /= g;
  }
  return {x, y, d};
}

RationalPoint make_rational(PointUm p) { return {p.x, p.y, 1}; }

int orientation(PointUm a, PointUm b, PointUm c) {
  const i128 v = i128{b.x - a.x} * (c.y - a.y) - i128{b.y - a.y} * (c.x - a.x);
  return (v > 0) - (v < 0);
}

bool on_segment(PointUm p, const Segment& s) {
  if (orientation(s.a, s.b, p) != 0) return false;
  return std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) &&
         std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
}

bool segments_intersect(const Segment& s, const Segment& t) {
  const int o1 = orientation(s.a, s.b, t.a);
  const int o2 = orientation(s.a, s.b, t.b);
  const int o3 = orientation(t.a, t.b, s.a);
  const int o4 = orientation(t.a, t.b, s.b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(t.a, s)) return true;
  if (o2 == 0 && on_segment(t.b, s)) return true;
  if (o3 == 0 && on_segment(s.a, t)) return true;
  if (o4 == 0 && on_segment(s.b, t)) return true;
  return false;
}

bool point_in_box(PointUm p, PointUm lo, PointUm hi) {
  return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y;
}

bool segment_touches_box(const Segment& s, PointUm lo, PointUm hi) {
  if (point_in_box(s.a, lo, hi) || point_in_box(s.b, lo, hi)) return true;
  const PointUm c0 = lo, c1{hi.x, lo.y}, c2 = hi, c3{lo.x, hi.y};
  return segments_intersect(s, {c0, c1}) || segments_intersect(s, {c1, c2}) ||
         segments_intersect(s, {c2, c3}) || segments_intersect(s, {c3, c0});
}

std::vector<RationalPoint> intersection_points(const Segment& s, const Segment& t) {
  std::vector<RationalPoint> out;
  if (!segments_intersect(s, t)) return out;
  const i128 rx = s.b.x - s.a.x, ry = s.b.y - s.a.y;
  const i128 sx = t.b.x - t.a.x, sy = t.b.y - t.a.y;
  const i128 qx = t.a.x - s.a.x, qy = t.a.y - s.a.y;
  const i128 den = rx * sy - ry * sx;
  if (den != 0) {
    Frac f{qx * sy - qy * sx, den};
    if (f.den < 0) {
      f.num = -f.num;
      f.den = -f.den;
    }
    out.push_back(point_at(s, f));
    return out;
  }
  // Collinear overlap: endpoints of either segment lying on the other.
  const i128 rr = rx * rx + ry * ry;
  std::vector<Frac> params;
  for (const PointUm& e : {t.a, t.b})
    if (on_segment(e, s)) params.push_back({(i128{e.x} - s.a.x) * rx + (i128{e.y} - s.a.y) * ry, rr});
  for (const PointUm& e : {s.a, s.b})
    if (on_segment(e, t)) params.push_back({(i128{e.x} - s.a.x) * rx + (i128{e.y} - s.a.y) * ry, rr});
  std::sort(params.begin(), params.end(), frac_less);
  out.push_back(point_at(s, params.front()));
  if (frac_less(params.front(), params.back())) out.push_back(point_at(s, params.back()));
  return out;
}

std::optional<PointD> first_intersection(const Segment& s, const Segment& t) {
  const auto pts = intersection_points(s, t);
  if (pts.empty()) return std::nullopt;
  return pts.front().to_double();
}

std::vector<Segment> polyline_segments(std::span<const PointUm> pts) {
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) segs.push_back({pts[i], pts[i + 1]});
  return segs;
}

bool polyline_self_intersects(std::span<const PointUm> pts, bool closed) {
  const auto segs = polyline_segments(pts);
  const std::size_t n = segs.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool consecutive = (j == i + 1) || (closed && i == 0 && j == n - 1);
      if (!consecutive) {
        if (segments_intersect(segs[i], segs[j])) return true;
        continue;
      }
      // Consecutive segments may only share their joint vertex.
      const auto shared = intersection_points(segs[i], segs[j]);
      if (shared.size() > 1) return true;
    }
  }
  return false;
}

}  // namespace wpt::geom
