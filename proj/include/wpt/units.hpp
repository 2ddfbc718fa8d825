#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wpt {

/// Fixed-point length with micrometre resolution. All sheet geometry is
/// stored this way so cut predicates can run in exact integer arithmetic.
class Length {
 public:
  constexpr Length() = default;

  static constexpr Length from_um(std::int64_t um) { return Length(um); }
  /// Snaps to the nearest micrometre.
  static Length from_mm(double mm) { return Length(std::llround(mm * 1000.0)); }

  constexpr std::int64_t um() const { return um_; }
  constexpr double mm() const { return static_cast<double>(um_) / 1000.0; }
  constexpr double meters() const { return static_cast<double>(um_) * 1e-6; }

  constexpr Length operator+(Length o) const { return Length(um_ + o.um_); }
  constexpr Length operator-(Length o) const { return Length(um_ - o.um_); }
  constexpr Length operator-() const { return Length(-um_); }
  constexpr Length operator*(std::int64_t s) const { return Length(um_ * s); }
  constexpr Length& operator+=(Length o) {
    um_ += o.um_;
    return *this;
  }
  constexpr auto operator<=>(const Length&) const = default;

 private:
  constexpr explicit Length(std::int64_t um) : um_(um) {}
  std::int64_t um_ = 0;
};

constexpr Length operator*(std::int64_t s, Length l) { return l * s; }

namespace literals {
constexpr Length operator""_um(unsigned long long v) {
  return Length::from_um(static_cast<std::int64_t>(v));
}
}  // namespace literals

/// Exact decimal rendering of a micrometre count as millimetres ("1.440").
std::string format_mm(std::int64_t um);

/// Spec or input violates a documented bound.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input could not be parsed or is structurally malformed.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed request the models cannot answer (above self-resonance,
/// infeasible design space, calibration without a root, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double mu0 = 4.0e-7 * pi;            // H/m
inline constexpr double eps0 = 8.8541878128e-12;      // F/m
inline constexpr double gravity = 9.80665;            // m/s^2
}  // namespace constants

}  // namespace wpt
