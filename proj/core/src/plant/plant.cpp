#include "neuroloop/plant/plant.hpp"

#include <cmath>

#include "neuroloop/common/angle.hpp"
#include "neuroloop/errors.hpp"

namespace neuroloop {

RollPlant::RollPlant(const PlantConfig& config)
    : config_(config),
      rng_(config.seed),
      process_rng_(config.seed ^ 0x9e3779b97f4a7c15ull),
      noise_(0.0, config.encoder_noise_deg > 0.0 ? config.encoder_noise_deg : 1.0) {
  if (config_.inertia <= 0.0 || config_.arm_length <= 0.0 || config_.thrust_coeff <= 0.0) {
    throw ConfigError("plant: inertia, arm length and thrust coefficient must be positive");
  }
  if (config_.timestep_us <= 0) throw ConfigError("plant: timestep must be positive");
  if (config_.motor_tau_ms < 0.0 || config_.pure_delay_ms < 0.0 ||
      config_.viscous_friction < 0.0) {
    throw ConfigError("plant: lag, delay and friction cannot be negative");
  }
  roll_ = deg_to_rad(config_.initial_roll_deg);
  rate_ = deg_to_rad(config_.initial_rate_dps);
  disturbance_ = config_.disturbance_torque;
  commanded_ = config_.initial_thrust;
  actual_ = config_.initial_thrust;
  const double dt_s = config_.timestep_us * 1e-6;
  motor_alpha_ = config_.motor_tau_ms > 0.0 ? std::exp(-dt_s / (config_.motor_tau_ms * 1e-3)) : 0.0;
  if (config_.process_noise_nm > 0.0 && config_.process_noise_tau_ms > 0.0) {
    noise_alpha_ = std::exp(-dt_s / (config_.process_noise_tau_ms * 1e-3));
    noise_kick_ = config_.process_noise_nm * std::sqrt(1.0 - noise_alpha_ * noise_alpha_);
  }
}

void RollPlant::command(const MotorPair& thrust) {
  const auto delay_us = static_cast<std::int64_t>(std::llround(config_.pure_delay_ms * 1000.0));
  if (delay_us == 0 && queue_.empty()) {
    commanded_ = thrust;
    return;
  }
  queue_.push_back({time_us() + delay_us, thrust});
}

void RollPlant::step() {
  const std::int64_t now = time_us();
  while (!queue_.empty() && queue_.front().effective_us <= now) {
    commanded_ = queue_.front().thrust;
    queue_.pop_front();
  }

  actual_.plus = commanded_.plus + (actual_.plus - commanded_.plus) * motor_alpha_;
  actual_.minus = commanded_.minus + (actual_.minus - commanded_.minus) * motor_alpha_;

  if (noise_kick_ > 0.0) {
    noise_torque_ = noise_torque_ * noise_alpha_ + noise_kick_ * unit_normal_(process_rng_);
  }

  const double lever = config_.arm_length * config_.thrust_coeff;
  const double torque = lever * (actual_.plus - actual_.minus) + config_.counter_torque +
                        disturbance_ + noise_torque_ - config_.viscous_friction * rate_;

  const double dt_s = config_.timestep_us * 1e-6;
  rate_ += dt_s * torque / config_.inertia;
  roll_ += dt_s * rate_;
  ++steps_;

  if (!std::isfinite(roll_) || !std::isfinite(rate_)) {
    throw SimulationFault("plant state diverged");
  }
}

void RollPlant::step(std::uint32_t n) {
  for (std::uint32_t i = 0; i < n; ++i) step();
}

double RollPlant::roll_deg() const { return rad_to_deg(roll_); }

double RollPlant::roll_rate_dps() const { return rad_to_deg(rate_); }

double RollPlant::encoder_deg() {
  const double quantized =
      std::round(rad_to_deg(roll_) / config_.encoder_step_deg) * config_.encoder_step_deg;
  if (config_.encoder_noise_deg <= 0.0) return quantized;
  return quantized + noise_(rng_);
}

}  // namespace neuroloop
