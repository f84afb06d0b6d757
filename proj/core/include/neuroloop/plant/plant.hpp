#pragma once

#include <cstdint>
#include <deque>
#include <random>

#include "neuroloop/control/decode.hpp"

namespace neuroloop {

/// Single-axis rotational rig driven by a differential thrust pair. Internally
/// SI (radians); accessors convert to degrees. The default counter torque
/// cancels the constant moment the mixer bias would otherwise produce at zero
/// command.
struct PlantConfig {
  double inertia = 0.008;            // kg m^2
  double arm_length = 0.15;          // m
  double thrust_coeff = 7.4e-4;      // N per thrust command unit
  double viscous_friction = 1.5e-4;  // N m s/rad
  double motor_tau_ms = 120.0;       // first-order thrust lag
  double pure_delay_ms = 0.0;        // command transport delay
  double counter_torque = -0.03774;  // N m
  double disturbance_torque = 0.0;   // N m
  double process_noise_nm = 0.016;   // stationary sigma of the vibration torque
  double process_noise_tau_ms = 50.0;
  std::int64_t timestep_us = 50;
  double encoder_step_deg = 0.1;
  double encoder_noise_deg = 0.2 / 3.0;  // Gaussian sigma
  std::uint64_t seed = 0;
  double initial_roll_deg = 0.0;
  double initial_rate_dps = 0.0;
  MotorPair initial_thrust{3050.0, 2710.0};  // pre-spun at the zero-command split
};

class RollPlant {
 public:
  explicit RollPlant(const PlantConfig& config = {});

  /// Sets the commanded thrust pair; held until the next call. Takes effect
  /// after the configured transport delay.
  void command(const MotorPair& thrust);

  /// Advances one (or n) physics timesteps: motor lag, torque balance,
  /// semi-implicit Euler. Throws SimulationFault if the state leaves the
  /// finite range.
  void step();
  void step(std::uint32_t n);

  double roll_deg() const;
  double roll_rate_dps() const;
  double roll_rad() const { return roll_; }
  double roll_rate_rps() const { return rate_; }

  /// Quantized, noisy angle measurement. Each call draws from the noise
  /// stream, so read exactly once per control tick for reproducible runs.
  double encoder_deg();

  void set_disturbance(double torque_nm) { disturbance_ = torque_nm; }
  double disturbance() const { return disturbance_; }

  std::int64_t time_us() const { return static_cast<std::int64_t>(steps_) * config_.timestep_us; }
  const MotorPair& actual_thrust() const { return actual_; }
  const PlantConfig& config() const { return config_; }

 private:
  struct PendingCommand {
    std::int64_t effective_us = 0;
    MotorPair thrust;
  };

  PlantConfig config_;
  double roll_ = 0.0;  // rad
  double rate_ = 0.0;  // rad/s
  double disturbance_ = 0.0;
  MotorPair commanded_;
  MotorPair actual_;
  std::deque<PendingCommand> queue_;
  std::int64_t steps_ = 0;
  double motor_alpha_ = 0.0;    // exp(-dt/tau)
  double noise_alpha_ = 0.0;    // per-step decay of the vibration torque
  double noise_kick_ = 0.0;     // innovation scale keeping the process stationary
  double noise_torque_ = 0.0;
  std::mt19937_64 rng_;         // encoder noise stream
  std::mt19937_64 process_rng_; // vibration stream, independent of read pattern
  std::normal_distribution<double> noise_;
  std::normal_distribution<double> unit_normal_{0.0, 1.0};
};

}  // namespace neuroloop
