#pragma once

#include <cstdint>
#include <vector>

#include "neuroloop/engine/synapses.hpp"
#include "neuroloop/events/dvs.hpp"

namespace neuroloop {

/// Discretization of line parameter space: 90 angle columns of 2 degrees and
/// distance bins of 10 px whose centers sit on multiples of the bin width.
/// Distances are measured in full-resolution pixel units even though votes
/// come from the downsampled frame; the coordinate scale restores the original
/// units so neighbouring angle columns stay separable over the frame diagonal.
struct HoughGridConfig {
  std::uint32_t theta_bins = 90;
  double theta_min_deg = -90.0;
  double theta_max_deg = 90.0;
  double r_step_px = 10.0;
  double r_min_px = -200.0;
  double r_max_px = 200.0;
  std::uint16_t frame_width = 60;
  std::uint16_t frame_height = 45;
  double coord_scale = 4.0;
};

class HoughGrid {
 public:
  explicit HoughGrid(HoughGridConfig config);

  const HoughGridConfig& config() const { return config_; }
  std::uint32_t theta_bins() const { return config_.theta_bins; }
  std::uint32_t r_bins() const { return r_bins_; }
  std::uint32_t cell_count() const { return config_.theta_bins * r_bins_; }

  /// Column center: theta_min + bin_width * index + half a bin.
  double theta_center_deg(std::uint32_t theta_idx) const;
  std::uint32_t theta_index(double theta_deg) const;  // nearest column, clamped

  /// Distance of a point from the line through the origin with normal angle
  /// theta: r = x cos(theta) + y sin(theta), coordinates center-origin.
  double r_of(double x, double y, double theta_deg) const;
  std::uint32_t r_bin_of(double r) const;  // throws InputError outside the grid
  double r_bin_low(std::uint32_t r_idx) const;
  double r_bin_high(std::uint32_t r_idx) const;

  std::uint32_t cell_index(std::uint32_t theta_idx, std::uint32_t r_idx) const {
    return theta_idx * r_bins_ + r_idx;
  }

  /// Center-origin coordinates of a downsampled pixel in full-resolution
  /// units.
  void pixel_coord(std::uint16_t x, std::uint16_t y, double& cx, double& cy) const;
  std::uint32_t pixel_index(std::uint16_t x, std::uint16_t y) const {
    return static_cast<std::uint32_t>(y) * config_.frame_width + x;
  }
  std::uint32_t pixel_count() const {
    return static_cast<std::uint32_t>(config_.frame_width) * config_.frame_height;
  }

  /// One synapse per (pixel, theta column) into the r bin the pixel votes for.
  std::vector<SynapseTriplet> connectivity(std::int32_t weight = 1) const;

 private:
  HoughGridConfig config_;
  std::uint32_t r_bins_ = 0;
  std::vector<double> cos_theta_;
  std::vector<double> sin_theta_;
};

}  // namespace neuroloop
