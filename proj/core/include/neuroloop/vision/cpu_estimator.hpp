#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "neuroloop/events/dvs.hpp"
#include "neuroloop/vision/angle.hpp"
#include "neuroloop/vision/hough_grid.hpp"

namespace neuroloop {

struct CpuEstimatorConfig {
  HoughGridConfig grid{};
  std::int64_t window_us = 3000;
  std::int64_t period_us = 1000;
  std::int32_t min_votes = 20;
};

/// Conventional dense Hough voting over a short sliding window of events,
/// re-evaluated on a fixed period. Uses the same parameter grid and per-pixel
/// vote pattern as the spiking detector so the two backends are comparable
/// cell for cell.
class CpuLineEstimator {
 public:
  explicit CpuLineEstimator(const CpuEstimatorConfig& config = {});

  void push_events(std::span<const DvsEvent> events);

  /// Evaluates every whole period boundary at or before t_us. The estimate at
  /// boundary T counts events with timestamps in [T - window, T).
  void advance_to(std::int64_t t_us);

  /// Best angle seen so far; held across windows that fall under min_votes.
  const AngleEstimate& estimate() const { return estimate_; }

  /// Whether the most recent evaluation itself met the vote floor.
  bool last_evaluation_valid() const { return last_eval_valid_; }
  std::int32_t last_peak_votes() const { return last_peak_votes_; }

  const HoughGrid& grid() const { return grid_; }
  const CpuEstimatorConfig& config() const { return config_; }

 private:
  struct WindowEvent {
    std::int64_t t_us = 0;
    std::uint32_t pixel = 0;
  };

  // Marks (pixel, theta) pairs whose vote lands outside the r range.
  static constexpr std::uint32_t kNoCell = 0xffffffffu;

  void add_votes(std::uint32_t pixel, std::int32_t delta);
  void evaluate(std::int64_t t_us);

  CpuEstimatorConfig config_;
  HoughGrid grid_;
  std::vector<std::uint32_t> pixel_cells_;  // pixel-major, theta_bins cells per pixel
  std::vector<std::int32_t> accumulator_;
  std::vector<WindowEvent> pending_;
  std::size_t pending_head_ = 0;
  std::deque<WindowEvent> window_;
  std::int64_t next_eval_us_ = 0;
  std::int64_t last_event_us_ = -1;
  AngleEstimate estimate_{};
  bool last_eval_valid_ = false;
  std::int32_t last_peak_votes_ = 0;
};

}  // namespace neuroloop
