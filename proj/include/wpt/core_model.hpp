#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpt/units.hpp"

namespace wpt {

/// Material constants. Resistivity is in ohm*mm, everything else SI.
struct MaterialDb {
  double lm_resistivity = 0.32e-3;             // ohm*mm, galinstan
  double lm_density = 6440.0;                  // kg/m^3
  double lm_surface_tension = 0.55;            // N/m
  double pva_youngs_modulus = 2.0e9;           // Pa
  double pva_relative_permittivity = 2.5;
  double pva_shear_strength = 20.0e6;          // Pa
  double contact_resistance_per_joint = 11.7e-3;  // ohm
  double recovery_fraction_per_cycle = 0.98;

  bool operator==(const MaterialDb&) const = default;
};

struct ChannelXSection {
  Length width = Length::from_um(1200);
  Length thickness = Length::from_um(1440);
  Length spacing = Length::from_um(1200);
  Length wall = Length::from_um(480);

  bool operator==(const ChannelXSection&) const = default;
};

inline constexpr Length kMinChannelThickness = Length::from_um(240);
inline constexpr Length kMaxChannelThickness = Length::from_um(4800);

struct CoilSpec {
  Length outer_side = Length::from_um(40000);
  int turns = 4;
  ChannelXSection xsec;

  bool operator==(const CoilSpec&) const = default;
};

enum class LayerRole { coil, ground_shield, control };

std::string to_string(LayerRole role);
LayerRole layer_role_from_string(const std::string& name);

struct SheetSpec {
  int grid_order = 2;  // grid is 2^k x 2^k coils
  Length pitch = Length::from_um(50000);
  CoilSpec coil;
  MaterialDb materials;
  double frequency = 6.78e6;  // Hz
  std::vector<LayerRole> layers{LayerRole::coil, LayerRole::ground_shield,
                                LayerRole::control};

  int grid_size() const { return 1 << grid_order; }
  /// Square sheet outline side, centred on the feed root.
  Length side() const { return pitch * grid_size(); }

  bool operator==(const SheetSpec&) const = default;
};

/// The 4x4, 40 mm, four-turn prototype sheet with its 1.44 mm channels.
SheetSpec prototype_sheet();

/// (row, col) into the coil grid. Row grows with +y, col with +x.
struct CoilIndex {
  int row = 0;
  int col = 0;
  auto operator<=>(const CoilIndex&) const = default;
};

struct PointUm {
  std::int64_t x = 0;
  std::int64_t y = 0;
  auto operator<=>(const PointUm&) const = default;
};

/// Centre of a coil relative to the sheet centre (the feed root).
PointUm coil_center(const SheetSpec& spec, CoilIndex idx);

// Spiral geometry ----------------------------------------------------------

/// Centerline side of turn i (0 = outermost).
Length coil_turn_side(const CoilSpec& coil, int turn);

/// Clear opening inside the innermost channel. Must stay positive.
Length coil_inner_opening(const CoilSpec& coil);

/// Analytic centerline length; the radial jogs between turns are ignored.
/// Throws ValidationError for a spiral that does not fit its envelope.
Length coil_conductor_length(const CoilSpec& coil);

/// Rendered square-spiral centerline (outer terminal first), in absolute
/// sheet coordinates around `center`. Consecutive vertices differ in
/// exactly one coordinate.
std::vector<PointUm> spiral_centerline(const CoilSpec& coil, PointUm center);

/// Channel layer plus the two walls.
Length sheet_thickness(const ChannelXSection& xsec);

// Recycling -----------------------------------------------------------------

struct CycleRecord {
  int cycle_index = 0;
  double injected_mass = 0.0;   // g
  double recovered_mass = 0.0;  // g
  double resistivity = 0.0;     // ohm*mm
  double contact_resistance = 0.0;  // ohm
};

struct RecycleLedger {
  std::vector<CycleRecord> cycle_records;

  double final_mass() const {
    return cycle_records.empty() ? 0.0 : cycle_records.back().recovered_mass;
  }
};

/// Cycle 0 is the first fabrication (nothing dissolved yet); every later
/// cycle dissolves, recovers a fixed fraction and refabricates.
RecycleLedger recycle_project(double initial_mass_g, int cycles,
                              const MaterialDb& materials);

// Validation ----------------------------------------------------------------

struct Violation {
  std::string field;
  std::string message;
};

std::vector<Violation> validate_sheet(const SheetSpec& spec);

/// Non-fatal layout advisories (e.g. routing margin too narrow).
std::vector<std::string> layout_warnings(const SheetSpec& spec);

/// Throws ValidationError listing every violation.
void require_valid(const SheetSpec& spec);

}  // namespace wpt
