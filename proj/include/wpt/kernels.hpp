#pragma once

#include <array>
#include <span>
#include <vector>

namespace wpt::kernels {

/// Straight current filament, metres.
struct Filament {
  std::array<double, 3> a{};
  std::array<double, 3> b{};
};

/// Exact Neumann mutual inductance of two straight filaments. Perpendicular
/// pairs contribute exactly zero; parallel (or anti-parallel) pairs use the
/// closed form. Only axis-aligned geometry occurs in sheet coils, so any
/// other orientation throws DomainError. Throws DomainError for collinear
/// overlapping filaments.
double filament_pair_mutual(const Filament& p, const Filament& q);

/// Sum over all pairs, single threaded, row-major order.
double neumann_sum_serial(std::span<const Filament> a, std::span<const Filament> b);

/// OpenMP over rows of `a`; each row is summed in the serial order and rows
/// are reduced in index order, so the result is bit-identical to the serial
/// kernel regardless of thread count.
double neumann_sum_parallel(std::span<const Filament> a, std::span<const Filament> b);

/// Splits every filament into `parts` equal pieces.
std::vector<Filament> subdivide(std::span<const Filament> fs, int parts);

int max_threads();

}  // namespace wpt::kernels
