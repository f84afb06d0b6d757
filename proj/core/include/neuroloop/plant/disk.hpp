#pragma once

#include <cstdint>
#include <vector>

namespace neuroloop {

/// Angle profile of the stimulus disk, reported unwrapped (it accumulates
/// past +-90 so downstream consumers control their own wrapping).
class DiskMotion {
 public:
  struct Segment {
    std::int64_t t_us = 0;
    double angle_deg = 0.0;
    double rate_dps = 0.0;
  };

  static DiskMotion constant_speed(double speed_dps, double initial_deg = 0.0);

  /// Piecewise-constant targets, each held for `hold_us`.
  static DiskMotion step_sequence(const std::vector<double>& targets_deg, std::int64_t hold_us);

  double angle_deg(std::int64_t t_us) const;
  double rate_dps(std::int64_t t_us) const;
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  explicit DiskMotion(std::vector<Segment> segments);

  std::vector<Segment> segments_;
};

}  // namespace neuroloop
