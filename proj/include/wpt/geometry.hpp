#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wpt/core_model.hpp"

namespace wpt::geom {

__extension__ typedef __int128 i128;

/// Coordinates beyond this magnitude (10 m) overflow the 128-bit rational
/// predicates used by the arrangement.
inline constexpr std::int64_t kCoordLimit = 10'000'000;

struct Segment {
  PointUm a;
  PointUm b;
};

inline std::int64_t cross(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by) {
  return ax * by - ay * bx;
}

/// Sign of (b - a) x (c - a).
int orientation(PointUm a, PointUm b, PointUm c);

bool on_segment(PointUm p, const Segment& s);

/// Closed segments share at least one point (touching and collinear
/// overlap included).
bool segments_intersect(const Segment& s, const Segment& t);

/// Closed segment meets the closed axis-aligned box [lo, hi].
bool segment_touches_box(const Segment& s, PointUm lo, PointUm hi);

bool point_in_box(PointUm p, PointUm lo, PointUm hi);

struct PointD {
  double x = 0.0;
  double y = 0.0;
};

/// First shared point of two closed segments, measured along `s`, in um.
std::optional<PointD> first_intersection(const Segment& s, const Segment& t);

/// Intersection points of `s` with `t`, exact, as reduced rationals. Returns
/// zero, one, or (for collinear overlap) the two overlap endpoints.
struct RationalPoint {
  i128 x = 0;
  i128 y = 0;
  i128 d = 1;  // > 0, gcd(x, y, d) == 1
  auto operator<=>(const RationalPoint&) const = default;
  PointD to_double() const {
    return {static_cast<double>(x) / static_cast<double>(d),
            static_cast<double>(y) / static_cast<double>(d)};
  }
};

RationalPoint make_rational(i128 x, i128 y, i128 d);
RationalPoint make_rational(PointUm p);

std::vector<RationalPoint> intersection_points(const Segment& s, const Segment& t);

/// A polyline touches itself anywhere other than at the shared vertex of
/// consecutive segments (closing vertex included when `closed`).
bool polyline_self_intersects(std::span<const PointUm> pts, bool closed);

std::vector<Segment> polyline_segments(std::span<const PointUm> pts);

}  // namespace wpt::geom
