#include "neuroloop/events/synth.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "neuroloop/common/angle.hpp"

namespace neuroloop {

namespace {

// Azimuth (mod 180) at which the dividing boundary passes through a pixel.
double boundary_azimuth_deg(double x, double y) {
  const double beta = rad_to_deg(std::atan2(y, x));
  double gamma = std::fmod(beta + 90.0, 180.0);
  if (gamma < 0.0) gamma += 180.0;
  return gamma;
}

double azimuth_mod180(double deg) {
  double a = std::fmod(deg, 180.0);
  if (a < 0.0) a += 180.0;
  return a;
}

// Shortest circular distance between two azimuths (period 180).
double azimuth_distance(double a, double b) {
  double d = std::abs(a - b);
  d = std::fmod(d, 180.0);
  return std::min(d, 180.0 - d);
}

}  // namespace

EventSynthesizer::EventSynthesizer(SyntheticSceneConfig config) : config_(config) {
  if (config_.contrast_threshold <= 0.0) throw ConfigError("contrast_threshold must be positive");
  if (config_.antialias_px <= 0.0) throw ConfigError("antialias_px must be positive");
  if (config_.render_interval_us <= 0) throw ConfigError("render_interval_us must be positive");
  const auto w = config_.geometry.width;
  const auto h = config_.geometry.height;
  pixels_.resize(static_cast<std::size_t>(w) * h);

  // Radius classes hold azimuth-sorted pixel lists so a render only touches
  // pixels near the boundary. The guard band keeps a pixel inside its window
  // for the whole traverse of the antialias ramp.
  const double guard_px = config_.antialias_px * 0.5 + 1.5;
  const double bounds[] = {3, 6, 12, 24, 48, 96, 1e9};
  classes_.resize(std::size(bounds));
  for (std::size_t c = 0; c < std::size(bounds); ++c) {
    const double inner = c == 0 ? 0.0 : bounds[c - 1];
    classes_[c].max_halfwidth_deg =
        inner <= guard_px ? 180.0 : rad_to_deg(std::asin(std::min(1.0, guard_px / inner)));
  }

  std::vector<std::vector<std::pair<float, std::uint32_t>>> keyed(classes_.size());
  for (std::uint16_t y = 0; y < h; ++y) {
    for (std::uint16_t x = 0; x < w; ++x) {
      const std::uint32_t id = static_cast<std::uint32_t>(y) * w + x;
      auto& p = pixels_[id];
      p.coord_x = static_cast<float>(x + 0.5 - w / 2.0);
      p.coord_y = static_cast<float>(y + 0.5 - h / 2.0);
      const double rho = std::hypot(p.coord_x, p.coord_y);
      if (rho < bounds[0]) {
        central_.push_back(id);
        continue;
      }
      std::size_t c = 0;
      while (rho >= bounds[c]) ++c;
      keyed[c].push_back({static_cast<float>(boundary_azimuth_deg(p.coord_x, p.coord_y)), id});
    }
  }
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    auto& k = keyed[c];
    std::sort(k.begin(), k.end());
    classes_[c].azimuth.reserve(k.size());
    classes_[c].by_azimuth.reserve(k.size());
    for (const auto& [az, id] : k) {
      classes_[c].azimuth.push_back(az);
      classes_[c].by_azimuth.push_back(id);
    }
  }
}

double EventSynthesizer::level_at(const Pixel& p, double normal_deg) const {
  const double n = deg_to_rad(normal_deg);
  const double d = p.coord_x * std::cos(n) + p.coord_y * std::sin(n);
  const double s = std::clamp(d / config_.antialias_px + 0.5, 0.0, 1.0);
  return config_.log_dark + s * (config_.log_bright - config_.log_dark);
}

void EventSynthesizer::process_pixel(std::uint32_t id, std::int64_t t_next, double normal_next,
                                     std::int64_t render_id, std::int64_t render_start,
                                     std::vector<DvsEvent>& chunk) {
  auto& p = pixels_[id];
  if (p.last_render == render_id) return;
  // While a pixel sat outside every candidate window its level was constant,
  // so the linear segment can start at the previous render without error.
  if (p.last_render != render_id - 1 && p.processed_us < render_start) {
    p.processed_us = render_start;
  }
  p.last_render = render_id;

  const double level_next = level_at(p, normal_next);
  const double level_prev = p.log_level;
  const double span_us = static_cast<double>(t_next - p.processed_us);
  const double c = config_.contrast_threshold;
  bool stalled = false;

  while (true) {
    const double diff = level_next - p.ref_level;
    if (std::abs(diff) < c) break;
    const bool pol = diff > 0.0;
    const double target = p.ref_level + (pol ? c : -c);

    std::int64_t t_cross;
    if ((pol && level_prev >= target) || (!pol && level_prev <= target)) {
      t_cross = p.processed_us;  // crossing was reached earlier but blocked
    } else {
      const double denom = level_next - level_prev;
      const double frac = std::clamp((target - level_prev) / denom, 0.0, 1.0);
      t_cross = p.processed_us + static_cast<std::int64_t>(std::llround(frac * span_us));
    }
    const std::int64_t earliest = p.last_event_us + config_.pixel_refractory_us;
    std::int64_t t_emit = std::max(t_cross, earliest);
    if (t_emit > t_next) {
      stalled = true;  // refractory runs past this render; deliver later
      break;
    }
    t_emit = std::max(t_emit, render_start);
    const auto w = config_.geometry.width;
    chunk.push_back({t_emit, static_cast<std::uint16_t>(id % w),
                     static_cast<std::uint16_t>(id / w), pol});
    p.ref_level = static_cast<float>(target);
    p.last_event_us = t_emit;
  }

  p.log_level = static_cast<float>(level_next);
  p.processed_us = t_next;
  if (stalled) stalled_.push_back(id);
}

void EventSynthesizer::render(std::int64_t t_next, double normal_next, std::vector<DvsEvent>& out) {
  const std::int64_t render_start = now_us_;
  const std::int64_t render_id = ++render_id_;
  std::vector<DvsEvent> chunk;

  const auto pending = std::move(stalled_);
  stalled_.clear();

  const double sweep = azimuth_distance(azimuth_mod180(normal_now_), azimuth_mod180(normal_next));
  if (sweep > 30.0) {
    for (std::uint32_t id = 0; id < pixels_.size(); ++id) {
      process_pixel(id, t_next, normal_next, render_id, render_start, chunk);
    }
  } else {
    const double a0 = azimuth_mod180(normal_now_);
    const double a1 = azimuth_mod180(normal_next);
    double mid = a0 + 0.5 * (a1 - a0);
    if (std::abs(a1 - a0) > 90.0) mid += 90.0;  // short arc crosses the wrap
    mid = azimuth_mod180(mid);
    for (const auto& cls : classes_) {
      const double half = sweep * 0.5 + cls.max_halfwidth_deg;
      if (cls.azimuth.empty()) continue;
      if (half >= 90.0) {
        for (const auto id : cls.by_azimuth) {
          process_pixel(id, t_next, normal_next, render_id, render_start, chunk);
        }
        continue;
      }
      // Circular window [mid-half, mid+half] over keys in [0, 180).
      double lo = mid - half;
      double hi = mid + half;
      const auto scan = [&](double from, double to) {
        auto first = std::lower_bound(cls.azimuth.begin(), cls.azimuth.end(),
                                      static_cast<float>(from));
        auto last = std::upper_bound(cls.azimuth.begin(), cls.azimuth.end(),
                                     static_cast<float>(to));
        for (auto it = first; it != last; ++it) {
          process_pixel(cls.by_azimuth[it - cls.azimuth.begin()], t_next, normal_next, render_id,
                        render_start, chunk);
        }
      };
      if (lo < 0.0) {
        scan(0.0, hi);
        scan(lo + 180.0, 180.0);
      } else if (hi > 180.0) {
        scan(lo, 180.0);
        scan(0.0, hi - 180.0);
      } else {
        scan(lo, hi);
      }
    }
    for (const auto id : central_) {
      process_pixel(id, t_next, normal_next, render_id, render_start, chunk);
    }
    for (const auto id : pending) {
      process_pixel(id, t_next, normal_next, render_id, render_start, chunk);
    }
  }

  std::sort(chunk.begin(), chunk.end(), [](const DvsEvent& a, const DvsEvent& b) {
    if (a.t_us != b.t_us) return a.t_us < b.t_us;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  out.insert(out.end(), chunk.begin(), chunk.end());

  now_us_ = t_next;
  normal_now_ = normal_next;
}

void EventSynthesizer::advance(std::int64_t t_target_us,
                               const std::function<double(std::int64_t)>& normal_angle_deg,
                               std::vector<DvsEvent>& out) {
  if (!initialized_) {
    normal_now_ = normal_angle_deg(now_us_);
    for (auto& p : pixels_) {
      p.log_level = p.ref_level = static_cast<float>(level_at(p, normal_now_));
      p.processed_us = now_us_;
      p.last_event_us = std::numeric_limits<std::int64_t>::min() / 2;
    }
    initialized_ = true;
  }
  while (now_us_ < t_target_us) {
    const std::int64_t t_next = std::min(now_us_ + config_.render_interval_us, t_target_us);
    render(t_next, normal_angle_deg(t_next), out);
  }
}

std::vector<DvsEvent> synthesize_events(const SyntheticSceneConfig& config,
                                        std::int64_t duration_us,
                                        const std::function<double(std::int64_t)>& normal_angle_deg) {
  EventSynthesizer synth(config);
  std::vector<DvsEvent> out;
  synth.advance(duration_us, normal_angle_deg, out);
  return out;
}

}  // namespace neuroloop
