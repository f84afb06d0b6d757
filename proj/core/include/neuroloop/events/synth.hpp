#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "neuroloop/events/dvs.hpp"

namespace neuroloop {

/// Half-plane scene: one side bright, one side dark, divided by a straight
/// boundary through the image center. The boundary normal angle is supplied
/// per timestamp by the caller, so the pattern can rotate freely (closed-loop
/// use passes the disk-minus-roll angle). The boundary blends linearly from
/// dark to bright over `antialias_px`.
struct SyntheticSceneConfig {
  SensorGeometry geometry{};
  double contrast_threshold = 0.7;  // log-intensity step per event
  double log_dark = -2.302585092994046;
  double log_bright = 0.0;
  double antialias_px = 1.0;
  std::int64_t pixel_refractory_us = 100;
  std::int64_t render_interval_us = 50;
  std::uint64_t seed = 0;  // reserved; the scene itself is noise-free
};

/// Event camera model: per pixel, an event fires whenever the log intensity
/// moves one contrast threshold away from the level at the pixel's previous
/// event, subject to a per-pixel refractory period. Event timestamps are
/// linearly interpolated between renders to microsecond resolution.
/// Deterministic for a fixed angle trajectory.
class EventSynthesizer {
 public:
  explicit EventSynthesizer(SyntheticSceneConfig config);

  /// Advances the scene to `t_target_us`, appending emitted events in
  /// non-decreasing timestamp order. `normal_angle_deg(t_us)` returns the
  /// boundary normal angle in degrees, continuous (not wrapped) in time.
  void advance(std::int64_t t_target_us, const std::function<double(std::int64_t)>& normal_angle_deg,
               std::vector<DvsEvent>& out);

  std::int64_t current_time_us() const { return now_us_; }
  const SyntheticSceneConfig& config() const { return config_; }

 private:
  struct Pixel {
    float coord_x = 0, coord_y = 0;  // center-origin, full resolution
    float log_level = 0;             // intensity at last processed time
    float ref_level = 0;             // level at the pixel's last event
    std::int64_t processed_us = 0;
    std::int64_t last_event_us = 0;
    std::int64_t last_render = -2;
  };
  struct RadiusClass {
    double max_halfwidth_deg = 180.0;          // azimuth window that guarantees coverage
    std::vector<std::uint32_t> by_azimuth;     // pixel ids sorted by boundary azimuth
    std::vector<float> azimuth;                // matching keys, degrees in [0, 180)
  };

  double level_at(const Pixel& p, double normal_deg) const;
  void process_pixel(std::uint32_t id, std::int64_t t_next, double normal_next,
                     std::int64_t render_id, std::int64_t render_start,
                     std::vector<DvsEvent>& chunk);
  void render(std::int64_t t_next, double normal_next, std::vector<DvsEvent>& out);

  SyntheticSceneConfig config_;
  std::vector<Pixel> pixels_;
  std::vector<RadiusClass> classes_;
  std::vector<std::uint32_t> central_;  // radius too small for azimuth windows
  std::vector<std::uint32_t> stalled_;  // pixels with an undelivered contrast step
  std::int64_t now_us_ = 0;
  double normal_now_ = 0.0;
  std::int64_t render_id_ = 0;
  bool initialized_ = false;
};

/// Open-loop convenience wrapper.
std::vector<DvsEvent> synthesize_events(const SyntheticSceneConfig& config,
                                        std::int64_t duration_us,
                                        const std::function<double(std::int64_t)>& normal_angle_deg);

}  // namespace neuroloop
