#pragma once

#include <numbers>

namespace dsbb84 {

inline constexpr double c_light = 299792458.0; // m/s, exact
inline constexpr double pi = std::numbers::pi;

} // namespace dsbb84
