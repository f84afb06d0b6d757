#pragma once

#include <cmath>

namespace neuroloop {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wrap an angle into [-180, 180).
inline double wrap_half_turn(double deg) {
  double w = std::fmod(deg + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  return w - 180.0;
}

/// Wrap a line orientation into [-90, 90). Orientations are periodic in 180
/// degrees because a line has no direction.
inline double wrap_line_angle(double deg) {
  double w = std::fmod(deg + 90.0, 180.0);
  if (w < 0.0) w += 180.0;
  return w - 90.0;
}

}  // namespace neuroloop
