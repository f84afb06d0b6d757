#include "neuroloop/vision/snn_estimator.hpp"

#include <algorithm>

#include "neuroloop/errors.hpp"

namespace neuroloop {

Engine SnnLineEstimator::make_engine(const VisionNetConfig& config, std::int64_t timestep_us) {
  VisionNetwork net = build_vision_network(config);
  EngineConfig engine_config;
  engine_config.timestep_us = timestep_us;
  return Engine(engine_config, std::move(net.network));
}

SnnLineEstimator::SnnLineEstimator(const VisionNetConfig& config, std::int64_t timestep_us)
    : grid_(config.grid), engine_(make_engine(config, timestep_us)) {
  cartesian_ = engine_.network().population_id("cartesian");
  memory_ = engine_.network().population_id("memory");
}

void SnnLineEstimator::push_events(std::span<const DvsEvent> events) {
  for (const auto& ev : events) {
    if (ev.t_us < last_event_us_) throw InputError("events must be time-ordered");
    last_event_us_ = ev.t_us;
    if (ev.t_us < engine_.next_timestep() * engine_.config().timestep_us) {
      throw InputError("event predates the next open timestep window");
    }
    pending_.push_back(ev);
  }
  if (pending_head_ > 0 && pending_head_ == pending_.size()) {
    pending_.clear();
    pending_head_ = 0;
  }
}

void SnnLineEstimator::advance_to(std::int64_t t_us) {
  const std::int64_t dt = engine_.config().timestep_us;
  SpikeBatch input;
  while ((engine_.next_timestep() + 1) * dt <= t_us) {
    const Timestep step = engine_.next_timestep();
    const std::int64_t window_end = (step + 1) * dt;
    input.timestep = step;
    input.spikes.clear();
    while (pending_head_ < pending_.size() && pending_[pending_head_].t_us < window_end) {
      const DvsEvent ev = downsample_event(
          pending_[pending_head_], static_cast<unsigned>(grid_.config().coord_scale));
      if (ev.x >= grid_.config().frame_width || ev.y >= grid_.config().frame_height) {
        throw InputError("event outside the sensor frame");
      }
      input.spikes.push_back({cartesian_, grid_.pixel_index(ev.x, ev.y)});
      ++pending_head_;
    }
    const SpikeBatch& out = engine_.step(input);
    const Spike probe{memory_, 0};
    auto it = std::lower_bound(out.spikes.begin(), out.spikes.end(), probe);
    if (it != out.spikes.end() && it->population == memory_) {
      estimate_.theta_deg = grid_.theta_center_deg(it->neuron);
      estimate_.t_us = window_end;
      estimate_.valid = true;
    }
  }
  if (pending_head_ > 4096 && pending_head_ == pending_.size()) {
    pending_.clear();
    pending_head_ = 0;
  }
}

}  // namespace neuroloop
