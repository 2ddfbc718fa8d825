#include "wpt/kernels.hpp"

#include <cmath>

#include "wpt/units.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wpt::kernels {

namespace {

double dot(const std::array<double, 3>& u, const std::array<double, 3>& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

std::array<double, 3> sub(const std::array<double, 3>& u, const std::array<double, 3>& v) {
  return {u[0] - v[0], u[1] - v[1], u[2] - v[2]};
}

// Second antiderivative of 1/sqrt(u^2 + d^2).
double antiderivative(double u, double d) {
  if (d == 0.0) return u == 0.0 ? 0.0 : std::abs(u) * std::log(std::abs(u));
  return u * std::asinh(u / d) - std::hypot(u, d);
}

double row_sum(const Filament& p, std::span<const Filament> b) {
  double s = 0.0;
  for (const auto& q : b) s += filament_pair_mutual(p, q);
  return s;
}

}  // namespace

double filament_pair_mutual(const Filament& p, const Filament& q) {
  const auto dp = sub(p.b, p.a);
  const auto dq = sub(q.b, q.a);
  const double lp = std::sqrt(dot(dp, dp));
  const double lq = std::sqrt(dot(dq, dq));
  if (lp == 0.0 || lq == 0.0) return 0.0;
  const double c = dot(dp, dq) / (lp * lq);
  if (std::abs(c) < 1e-12) return 0.0;
  if (std::abs(std::abs(c) - 1.0) > 1e-12)
    throw DomainError("filament kernel supports parallel or perpendicular filaments only");

  const std::array<double, 3> u{dp[0] / lp, dp[1] / lp, dp[2] / lp};
  const auto qa = sub(q.a, p.a);
  const auto qb = sub(q.b, p.a);
  const double a1 = 0.0, a2 = lp;
  const double b1 = dot(qa, u), b2 = dot(qb, u);
  const std::array<double, 3> perp{qa[0] - b1 * u[0], qa[1] - b1 * u[1], qa[2] - b1 * u[2]};
  double d = std::sqrt(dot(perp, perp));
  if (d < 1e-12 * (lp + lq)) {
    d = 0.0;
    const double lo = std::min(b1, b2), hi = std::max(b1, b2);
    if (lo <= a2 && hi >= a1) throw DomainError("overlapping conductor centerlines");
  }
  const double f = antiderivative(b2 - a1, d) - antiderivative(b2 - a2, d) -
                   antiderivative(b1 - a1, d) + antiderivative(b1 - a2, d);
  return constants::mu0 / (4.0 * constants::pi) * f;
}

double neumann_sum_serial(std::span<const Filament> a, std::span<const Filament> b) {
  double total = 0.0;
  for (const auto& p : a) total += row_sum(p, b);
  return total;
}

double neumann_sum_parallel(std::span<const Filament> a, std::span<const Filament> b) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  std::vector<double> rows(a.size());
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      rows[i] = row_sum(a[i], b);
    } catch (...) {
#pragma omp atomic write
      failed = true;
    }
  }
  // Exceptions cannot leave an OpenMP region; rerun serially to rethrow.
  if (failed) return neumann_sum_serial(a, b);
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

std::vector<Filament> subdivide(std::span<const Filament> fs, int parts) {
  std::vector<Filament> out;
  out.reserve(fs.size() * static_cast<std::size_t>(parts));
  for (const auto& f : fs) {
    for (int k = 0; k < parts; ++k) {
      const double t0 = static_cast<double>(k) / parts;
      const double t1 = static_cast<double>(k + 1) / parts;
      Filament piece;
      for (int c = 0; c < 3; ++c) {
        piece.a[c] = f.a[c] + (f.b[c] - f.a[c]) * t0;
        piece.b[c] = f.a[c] + (f.b[c] - f.a[c]) * t1;
      }
      out.push_back(piece);
    }
  }
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace wpt::kernels
