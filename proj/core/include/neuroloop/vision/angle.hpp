#pragma once

#include <cstdint>

namespace neuroloop {

/// One angle estimate sample. `valid` is false while no detection is active;
/// consumers hold the last valid value across gaps.
struct AngleEstimate {
  double theta_deg = 0.0;
  std::int64_t t_us = 0;
  bool valid = false;
};

}  // namespace neuroloop
