#pragma once
// Midpoint-rule Neumann integral over straight pieces. Deliberately naive:
// no closed-form kernel, just dl . dl' / r summed over fine pieces.

#include <array>
#include <cmath>
#include <vector>

namespace oracle {

using Vec3 = std::array<double, 3>;

struct Piece {
  Vec3 mid;
  Vec3 dl;
};

inline std::vector<Piece> discretize(const std::vector<Vec3>& polyline, int per_side) {
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Vec3& a = polyline[i];
    const Vec3& b = polyline[i + 1];
    for (int k = 0; k < per_side; ++k) {
      const double u = (k + 0.5) / per_side;
      Piece p;
      for (int c = 0; c < 3; ++c) {
        p.mid[c] = a[c] + u * (b[c] - a[c]);
        p.dl[c] = (b[c] - a[c]) / per_side;
      }
      out.push_back(p);
    }
  }
  return out;
}

inline double neumann_midpoint(const std::vector<Vec3>& a, const std::vector<Vec3>& b, int per_side) {
  const auto pa = discretize(a, per_side);
  const auto pb = discretize(b, per_side);
  double sum = 0.0;
  for (const auto& p : pa)
    for (const auto& q : pb) {
      const double dx = p.mid[0] - q.mid[0], dy = p.mid[1] - q.mid[1], dz = p.mid[2] - q.mid[2];
      const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
      sum += (p.dl[0] * q.dl[0] + p.dl[1] * q.dl[1] + p.dl[2] * q.dl[2]) / r;
    }
  return 1e-7 * sum;  // mu0 / 4 pi
}

// Grover's mutual inductance of two parallel filaments of lengths l and m
// offset by d with longitudinal start offsets; general form via the
// F(u) = u asinh(u/d) - sqrt(u^2 + d^2) antiderivative, written out longhand.
inline double parallel_pair(double a1, double a2, double b1, double b2, double d) {
  const auto F = [d](double u) { return u * std::asinh(u / d) - std::sqrt(u * u + d * d); };
  return 1e-7 * (F(b2 - a1) - F(b2 - a2) - F(b1 - a1) + F(b1 - a2));
}

// Partial self-inductance of a straight rectangular bar (Ruehli's
// approximation via the geometric mean distance of the section).
inline double bar_self(double len, double w, double t) {
  const double gmd = 0.2235 * (w + t);
  return 2e-7 * len * (std::log(2.0 * len / gmd) - 1.0 + gmd / len);
}

// Partial-inductance self inductance of the spiral: bar self terms plus
// signed parallel-pair mutuals between every pair of distinct sides of a
// rectilinear centerline (metres).
inline double partial_inductance(const std::vector<Vec3>& pts, double w_mm, double t_mm) {
  struct Side {
    Vec3 a, b;
  };
  std::vector<Side> sides;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) sides.push_back({pts[i], pts[i + 1]});
  double L = 0.0;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    const auto& p = sides[i];
    const double lp = std::hypot(p.b[0] - p.a[0], p.b[1] - p.a[1]);
    L += bar_self(lp, w_mm / 1000.0, t_mm / 1000.0);
    for (std::size_t j = 0; j < sides.size(); ++j) {
      if (i == j) continue;
      const auto& q = sides[j];
      const bool px = p.a[1] == p.b[1], qx = q.a[1] == q.b[1];
      if (px != qx) continue;  // perpendicular
      // Axis along the pair, coordinates relative to p.a.
      const int ax = px ? 0 : 1, ox = px ? 1 : 0;
      const double dir = p.b[ax] > p.a[ax] ? 1.0 : -1.0;
      const double a2 = std::abs(p.b[ax] - p.a[ax]);
      double b1 = (q.a[ax] - p.a[ax]) * dir, b2 = (q.b[ax] - p.a[ax]) * dir;
      const double d = std::abs(q.a[ox] - p.a[ox]);
      if (d == 0.0) continue;  // collinear neighbours across a corner never occur in a spiral
      L += parallel_pair(0.0, a2, b1, b2, d);
    }
  }
  return L;
}

}  // namespace oracle
