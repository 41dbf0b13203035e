#pragma once

#include <numbers>

namespace tendonstat::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kStandardGravity = 9.80665;  // m/s^2

constexpr double deg(double degrees) { return degrees * kPi / 180.0; }
constexpr double to_deg(double radians) { return radians * 180.0 / kPi; }
constexpr double mm(double millimetres) { return millimetres * 1e-3; }
constexpr double to_mm(double metres) { return metres * 1e3; }
constexpr double grams(double g) { return g * 1e-3; }

}  // namespace tendonstat::units
