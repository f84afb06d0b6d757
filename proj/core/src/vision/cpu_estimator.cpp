#include "neuroloop/vision/cpu_estimator.hpp"

#include <cmath>

#include "neuroloop/errors.hpp"

namespace neuroloop {

CpuLineEstimator::CpuLineEstimator(const CpuEstimatorConfig& config)
    : config_(config), grid_(config.grid) {
  if (config_.window_us <= 0 || config_.period_us <= 0) {
    throw ConfigError("CpuLineEstimator: window and period must be positive");
  }
  pixel_cells_.assign(static_cast<std::size_t>(grid_.pixel_count()) * grid_.theta_bins(),
                      kNoCell);
  for (const auto& edge : grid_.connectivity(1)) {
    const std::size_t base = static_cast<std::size_t>(edge.pre) * grid_.theta_bins();
    const std::uint32_t theta_idx = edge.post / grid_.r_bins();
    pixel_cells_[base + theta_idx] = edge.post;
  }
  accumulator_.assign(grid_.cell_count(), 0);
  next_eval_us_ = config_.period_us;
}

void CpuLineEstimator::push_events(std::span<const DvsEvent> events) {
  const auto scale = static_cast<unsigned>(grid_.config().coord_scale);
  for (const auto& raw : events) {
    if (raw.t_us < last_event_us_) throw InputError("events must be time-ordered");
    last_event_us_ = raw.t_us;
    const DvsEvent ev = downsample_event(raw, scale);
    if (ev.x >= grid_.config().frame_width || ev.y >= grid_.config().frame_height) {
      throw InputError("event outside the sensor frame");
    }
    pending_.push_back({ev.t_us, grid_.pixel_index(ev.x, ev.y)});
  }
  if (pending_head_ > 0 && pending_head_ == pending_.size()) {
    pending_.clear();
    pending_head_ = 0;
  }
}

void CpuLineEstimator::add_votes(std::uint32_t pixel, std::int32_t delta) {
  const std::size_t base = static_cast<std::size_t>(pixel) * grid_.theta_bins();
  for (std::uint32_t ti = 0; ti < grid_.theta_bins(); ++ti) {
    const std::uint32_t cell = pixel_cells_[base + ti];
    if (cell != kNoCell) accumulator_[cell] += delta;
  }
}

void CpuLineEstimator::evaluate(std::int64_t t_us) {
  while (pending_head_ < pending_.size() && pending_[pending_head_].t_us < t_us) {
    const WindowEvent& ev = pending_[pending_head_++];
    window_.push_back(ev);
    add_votes(ev.pixel, +1);
  }
  while (!window_.empty() && window_.front().t_us < t_us - config_.window_us) {
    add_votes(window_.front().pixel, -1);
    window_.pop_front();
  }

  std::int32_t best_votes = 0;
  std::uint32_t best_cell = 0;
  double best_abs_theta = 0.0;
  double best_theta = 0.0;
  for (std::uint32_t cell = 0; cell < grid_.cell_count(); ++cell) {
    const std::int32_t votes = accumulator_[cell];
    if (votes < best_votes) continue;
    const double theta = grid_.theta_center_deg(cell / grid_.r_bins());
    if (votes == best_votes && best_votes > 0) {
      if (std::abs(theta) > best_abs_theta) continue;
      if (std::abs(theta) == best_abs_theta && theta >= best_theta) continue;
    }
    best_votes = votes;
    best_cell = cell;
    best_abs_theta = std::abs(theta);
    best_theta = theta;
  }

  last_peak_votes_ = best_votes;
  last_eval_valid_ = best_votes >= config_.min_votes;
  if (last_eval_valid_) {
    estimate_.theta_deg = grid_.theta_center_deg(best_cell / grid_.r_bins());
    estimate_.t_us = t_us;
    estimate_.valid = true;
  }
}

void CpuLineEstimator::advance_to(std::int64_t t_us) {
  while (next_eval_us_ <= t_us) {
    evaluate(next_eval_us_);
    next_eval_us_ += config_.period_us;
  }
  if (pending_head_ > 4096 && pending_head_ == pending_.size()) {
    pending_.clear();
    pending_head_ = 0;
  }
}

}  // namespace neuroloop
