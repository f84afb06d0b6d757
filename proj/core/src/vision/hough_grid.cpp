#include "neuroloop/vision/hough_grid.hpp"

#include <cmath>

#include "neuroloop/common/angle.hpp"

namespace neuroloop {

HoughGrid::HoughGrid(HoughGridConfig config) : config_(config) {
  if (config_.theta_bins == 0) throw ConfigError("theta_bins must be > 0");
  if (config_.r_step_px <= 0.0 || config_.r_max_px <= config_.r_min_px) {
    throw ConfigError("bad r grid bounds");
  }
  r_bins_ = static_cast<std::uint32_t>(
                std::llround((config_.r_max_px - config_.r_min_px) / config_.r_step_px)) +
            1;
  cos_theta_.resize(config_.theta_bins);
  sin_theta_.resize(config_.theta_bins);
  for (std::uint32_t i = 0; i < config_.theta_bins; ++i) {
    const double t = deg_to_rad(theta_center_deg(i));
    cos_theta_[i] = std::cos(t);
    sin_theta_[i] = std::sin(t);
  }
}

double HoughGrid::theta_center_deg(std::uint32_t theta_idx) const {
  const double width = (config_.theta_max_deg - config_.theta_min_deg) / config_.theta_bins;
  return config_.theta_min_deg + width * theta_idx + width * 0.5;
}

std::uint32_t HoughGrid::theta_index(double theta_deg) const {
  const double width = (config_.theta_max_deg - config_.theta_min_deg) / config_.theta_bins;
  const auto idx = static_cast<std::int64_t>(
      std::llround((theta_deg - config_.theta_min_deg - width * 0.5) / width));
  if (idx < 0) return 0;
  if (idx >= config_.theta_bins) return config_.theta_bins - 1;
  return static_cast<std::uint32_t>(idx);
}

double HoughGrid::r_of(double x, double y, double theta_deg) const {
  const double t = deg_to_rad(theta_deg);
  return x * std::cos(t) + y * std::sin(t);
}

std::uint32_t HoughGrid::r_bin_of(double r) const {
  const auto idx = static_cast<std::int64_t>(std::llround((r - config_.r_min_px) / config_.r_step_px));
  if (idx < 0 || idx >= r_bins_) {
    throw InputError("r = " + std::to_string(r) + " outside the grid");
  }
  return static_cast<std::uint32_t>(idx);
}

double HoughGrid::r_bin_low(std::uint32_t r_idx) const {
  return config_.r_min_px + config_.r_step_px * r_idx - config_.r_step_px * 0.5;
}

double HoughGrid::r_bin_high(std::uint32_t r_idx) const {
  return r_bin_low(r_idx) + config_.r_step_px;
}

void HoughGrid::pixel_coord(std::uint16_t x, std::uint16_t y, double& cx, double& cy) const {
  // Center of the source-pixel block this downsampled pixel covers.
  const double s = config_.coord_scale;
  cx = s * x + (s - 1.0) * 0.5 - s * config_.frame_width * 0.5;
  cy = s * y + (s - 1.0) * 0.5 - s * config_.frame_height * 0.5;
}

std::vector<SynapseTriplet> HoughGrid::connectivity(std::int32_t weight) const {
  std::vector<SynapseTriplet> triplets;
  triplets.reserve(static_cast<std::size_t>(pixel_count()) * config_.theta_bins);
  for (std::uint16_t y = 0; y < config_.frame_height; ++y) {
    for (std::uint16_t x = 0; x < config_.frame_width; ++x) {
      double cx = 0, cy = 0;
      pixel_coord(x, y, cx, cy);
      const auto pre = pixel_index(x, y);
      for (std::uint32_t ti = 0; ti < config_.theta_bins; ++ti) {
        const double r = cx * cos_theta_[ti] + cy * sin_theta_[ti];
        triplets.push_back({pre, cell_index(ti, r_bin_of(r)), weight});
      }
    }
  }
  return triplets;
}

}  // namespace neuroloop
