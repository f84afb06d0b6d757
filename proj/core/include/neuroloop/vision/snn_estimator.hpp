#pragma once

#include <span>
#include <vector>

#include "neuroloop/engine/engine.hpp"
#include "neuroloop/events/dvs.hpp"
#include "neuroloop/vision/angle.hpp"
#include "neuroloop/vision/hough_network.hpp"

namespace neuroloop {

/// Streams camera events through the spiking line detector. Events are
/// downsampled, grouped into one batch per engine timestep and injected; the
/// current angle is whatever the memory layer holds. Events must arrive in
/// non-decreasing time order across calls.
class SnnLineEstimator {
 public:
  explicit SnnLineEstimator(const VisionNetConfig& config = {}, std::int64_t timestep_us = 50);

  void push_events(std::span<const DvsEvent> events);

  /// Runs every timestep whose event window closes at or before t_us.
  void advance_to(std::int64_t t_us);

  /// Latched angle; valid once the memory layer has fired at least once.
  const AngleEstimate& estimate() const { return estimate_; }

  const HoughGrid& grid() const { return grid_; }
  std::uint32_t cartesian_population() const { return cartesian_; }
  std::uint32_t memory_population() const { return memory_; }
  Engine& engine() { return engine_; }
  const Engine& engine() const { return engine_; }

 private:
  static Engine make_engine(const VisionNetConfig& config, std::int64_t timestep_us);

  HoughGrid grid_;
  Engine engine_;
  std::uint32_t cartesian_ = 0;
  std::uint32_t memory_ = 0;
  std::vector<DvsEvent> pending_;
  std::size_t pending_head_ = 0;
  std::int64_t last_event_us_ = -1;
  AngleEstimate estimate_{};
};

}  // namespace neuroloop
