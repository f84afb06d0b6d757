#pragma once

#include <cstdint>

#include "neuroloop/errors.hpp"

namespace neuroloop {

/// One change event: microsecond timestamp, pixel, and polarity
/// (true = brightness increase).
struct DvsEvent {
  std::int64_t t_us = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  bool polarity = false;

  friend bool operator==(const DvsEvent&, const DvsEvent&) = default;
};

struct SensorGeometry {
  std::uint16_t width = 240;
  std::uint16_t height = 180;
};

/// Power-of-two spatial downsampling via coordinate shift; timestamp and
/// polarity pass through unchanged.
inline DvsEvent downsample_event(const DvsEvent& e, unsigned factor = 4) {
  if (factor == 0 || (factor & (factor - 1)) != 0) {
    throw ConfigError("downsample factor must be a power of two");
  }
  unsigned shift = 0;
  for (unsigned f = factor; f > 1; f >>= 1) ++shift;
  DvsEvent out = e;
  out.x = static_cast<std::uint16_t>(e.x >> shift);
  out.y = static_cast<std::uint16_t>(e.y >> shift);
  return out;
}

inline SensorGeometry downsampled_geometry(const SensorGeometry& g, unsigned factor = 4) {
  return {static_cast<std::uint16_t>(g.width / factor),
          static_cast<std::uint16_t>(g.height / factor)};
}

}  // namespace neuroloop
