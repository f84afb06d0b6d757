#include "neuroloop/plant/disk.hpp"

#include <algorithm>

#include "neuroloop/errors.hpp"

namespace neuroloop {

DiskMotion::DiskMotion(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw ConfigError("disk motion needs at least one segment");
}

DiskMotion DiskMotion::constant_speed(double speed_dps, double initial_deg) {
  return DiskMotion({{0, initial_deg, speed_dps}});
}

DiskMotion DiskMotion::step_sequence(const std::vector<double>& targets_deg,
                                     std::int64_t hold_us) {
  if (targets_deg.empty()) throw ConfigError("step sequence needs at least one target");
  if (hold_us <= 0) throw ConfigError("step hold time must be positive");
  std::vector<Segment> segments;
  segments.reserve(targets_deg.size());
  std::int64_t t = 0;
  for (double target : targets_deg) {
    segments.push_back({t, target, 0.0});
    t += hold_us;
  }
  return DiskMotion(std::move(segments));
}

double DiskMotion::angle_deg(std::int64_t t_us) const {
  const Segment& s = *std::prev(std::upper_bound(
      segments_.begin() + 1, segments_.end(), t_us,
      [](std::int64_t t, const Segment& seg) { return t < seg.t_us; }));
  return s.angle_deg + s.rate_dps * static_cast<double>(t_us - s.t_us) * 1e-6;
}

double DiskMotion::rate_dps(std::int64_t t_us) const {
  const Segment& s = *std::prev(std::upper_bound(
      segments_.begin() + 1, segments_.end(), t_us,
      [](std::int64_t t, const Segment& seg) { return t < seg.t_us; }));
  return s.rate_dps;
}

}  // namespace neuroloop
