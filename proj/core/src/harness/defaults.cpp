#include "neuroloop/harness/defaults.hpp"

#include <cmath>

#include "neuroloop/errors.hpp"

namespace neuroloop {

Config default_config() {
  Config c;

  c.set("engine.timestep_us", std::int64_t{50});

  c.set("grid.theta_bins", std::int64_t{90});
  c.set("grid.theta_min_deg", -90.0);
  c.set("grid.theta_max_deg", 90.0);
  c.set("grid.r_step_px", 10.0);
  c.set("grid.r_min_px", -200.0);
  c.set("grid.r_max_px", 200.0);
  c.set("grid.frame_width", std::int64_t{60});
  c.set("grid.frame_height", std::int64_t{45});
  c.set("grid.coord_scale", 4.0);

  c.set("vision.unit_weight", std::int64_t{1});
  c.set("vision.coincidence_threshold", std::int64_t{20});
  c.set("vision.hough_decay_tau", 3.0);
  c.set("vision.cleanup_lateral_inhibition", std::int64_t{2});
  c.set("vision.memory_excitation", std::int64_t{4});
  c.set("vision.memory_inhibition", std::int64_t{3});

  c.set("cpu_estimator.window_us", std::int64_t{3000});
  c.set("cpu_estimator.period_us", std::int64_t{1000});
  c.set("cpu_estimator.min_votes", std::int64_t{20});

  c.set("average.window", std::int64_t{200});
  c.set("average.stride", std::int64_t{20});
  c.set("rate.lag", std::int64_t{5});

  c.set("decode.bins", std::int64_t{361});
  c.set("decode.u_min", -1850.0);
  c.set("decode.u_max", 1850.0);
  c.set("thrust.center", 2880.0);
  c.set("thrust.bias", 170.0);

  c.set("gains.encoder.kp", 12.0);
  c.set("gains.encoder.kd", 10.0);
  c.set("gains.vision_snn.kp", 34.9);
  c.set("gains.vision_snn.kd", 10.47);
  c.set("gains.vision_cpu.kp", 52.36);
  c.set("gains.vision_cpu.kd", 15.71);

  c.set("snn_pd.error_range_deg", 90.0);
  c.set("snn_pd.rate_range_dps", 1500.0);
  c.set("snn_pd.coincidence_threshold", std::int64_t{2});
  c.set("snn_pd.grid_decay_tau", 1.0);
  c.set("snn_pd.steps_per_tick", std::int64_t{20});

  c.set("adapt.window_ms", 500.0);
  c.set("adapt.mse_threshold_deg_sq", 25.0);
  c.set("adapt.error_weight_scale", 8.0);
  c.set("adapt.bank_size", std::int64_t{64});
  c.set("adapt.bank_bias", std::int64_t{32});
  c.set("adapt.ff_gain", 18.75);

  c.set("plant.inertia", 0.008);
  c.set("plant.arm_length", 0.15);
  c.set("plant.thrust_coeff", 7.4e-4);
  c.set("plant.viscous_friction", 1.5e-4);
  c.set("plant.motor_tau_ms", 120.0);
  c.set("plant.pure_delay_ms", 0.0);
  c.set("plant.counter_torque", -0.03774);
  c.set("plant.process_noise_nm", 0.0015);
  c.set("plant.process_noise_tau_ms", 50.0);
  // Extra vibration torque fed into the stand by the disk drive motor,
  // proportional to drive speed (zero when the disk is parked).
  c.set("plant.drive_noise_coupling", 5.0e-6);
  c.set("plant.encoder_step_deg", 0.1);
  c.set("plant.encoder_noise_deg", 0.2 / 3.0);
  c.set("plant.initial_thrust_plus", 3050.0);
  c.set("plant.initial_thrust_minus", 2710.0);

  c.set("scene.contrast_threshold", 0.7);
  c.set("scene.log_dark", std::log(0.1));
  c.set("scene.log_bright", 0.0);
  c.set("scene.antialias_px", 1.0);
  c.set("scene.refractory_us", std::int64_t{100});
  c.set("scene.render_interval_us", std::int64_t{50});

  // Rotor-induced frame vibration, seen by the camera as angular jitter. It
  // keeps boundary pixels firing when the line is otherwise still, which is
  // what makes a standing line visible to an event camera at all. The
  // speed coefficient adds mount shake from disk unbalance, growing with
  // drive speed.
  c.set("rig.vibration_amp_deg", 1.2);
  c.set("rig.vibration_hz", 300.0);
  c.set("rig.vibration_speed_coeff", 0.001);

  // Speed ripple of the disk servo as a fraction of the commanded rate.
  // Off by default: the stock drive holds its rate well.
  c.set("disk.ripple_frac", 0.0);
  c.set("disk.ripple_hz", 0.8);

  c.set("weight.torque_nm", 0.02664);

  c.set("scenario.duration_s", 10.0);
  c.set("scenario.analysis_s", 5.0);
  c.set("scenario.step_hold_ms", 2000.0);

  c.set("bench.duration_s", 1.0);
  c.set("bench.speed_dps", 360.0);

  c.sealed_ = true;
  return c;
}

HoughGridConfig grid_from(const Config& config) {
  HoughGridConfig g;
  g.theta_bins = static_cast<std::uint32_t>(config.get_int("grid.theta_bins"));
  g.theta_min_deg = config.get_double("grid.theta_min_deg");
  g.theta_max_deg = config.get_double("grid.theta_max_deg");
  g.r_step_px = config.get_double("grid.r_step_px");
  g.r_min_px = config.get_double("grid.r_min_px");
  g.r_max_px = config.get_double("grid.r_max_px");
  g.frame_width = static_cast<std::uint16_t>(config.get_int("grid.frame_width"));
  g.frame_height = static_cast<std::uint16_t>(config.get_int("grid.frame_height"));
  g.coord_scale = config.get_double("grid.coord_scale");
  return g;
}

VisionNetConfig vision_net_from(const Config& config) {
  VisionNetConfig v;
  v.grid = grid_from(config);
  v.unit_weight = static_cast<std::int32_t>(config.get_int("vision.unit_weight"));
  v.coincidence_threshold =
      static_cast<std::int32_t>(config.get_int("vision.coincidence_threshold"));
  v.hough_decay_tau = config.get_double("vision.hough_decay_tau");
  v.cleanup_lateral_inhibition =
      static_cast<std::int32_t>(config.get_int("vision.cleanup_lateral_inhibition"));
  v.memory_excitation = static_cast<std::int32_t>(config.get_int("vision.memory_excitation"));
  v.memory_inhibition = static_cast<std::int32_t>(config.get_int("vision.memory_inhibition"));
  return v;
}

CpuEstimatorConfig cpu_estimator_from(const Config& config) {
  CpuEstimatorConfig e;
  e.grid = grid_from(config);
  e.window_us = config.get_int("cpu_estimator.window_us");
  e.period_us = config.get_int("cpu_estimator.period_us");
  e.min_votes = static_cast<std::int32_t>(config.get_int("cpu_estimator.min_votes"));
  return e;
}

SyntheticSceneConfig scene_from(const Config& config, std::uint64_t seed) {
  const HoughGridConfig grid = grid_from(config);
  const auto scale = static_cast<unsigned>(grid.coord_scale);
  SyntheticSceneConfig s;
  s.geometry.width = static_cast<std::uint16_t>(grid.frame_width * scale);
  s.geometry.height = static_cast<std::uint16_t>(grid.frame_height * scale);
  s.contrast_threshold = config.get_double("scene.contrast_threshold");
  s.log_dark = config.get_double("scene.log_dark");
  s.log_bright = config.get_double("scene.log_bright");
  s.antialias_px = config.get_double("scene.antialias_px");
  s.pixel_refractory_us = config.get_int("scene.refractory_us");
  s.render_interval_us = config.get_int("scene.render_interval_us");
  s.seed = seed;
  return s;
}

PlantConfig plant_from(const Config& config, std::uint64_t seed) {
  PlantConfig p;
  p.inertia = config.get_double("plant.inertia");
  p.arm_length = config.get_double("plant.arm_length");
  p.thrust_coeff = config.get_double("plant.thrust_coeff");
  p.viscous_friction = config.get_double("plant.viscous_friction");
  p.motor_tau_ms = config.get_double("plant.motor_tau_ms");
  p.pure_delay_ms = config.get_double("plant.pure_delay_ms");
  p.counter_torque = config.get_double("plant.counter_torque");
  p.process_noise_nm = config.get_double("plant.process_noise_nm");
  p.process_noise_tau_ms = config.get_double("plant.process_noise_tau_ms");
  p.timestep_us = config.get_int("engine.timestep_us");
  p.encoder_step_deg = config.get_double("plant.encoder_step_deg");
  p.encoder_noise_deg = config.get_double("plant.encoder_noise_deg");
  p.initial_thrust = {config.get_double("plant.initial_thrust_plus"),
                      config.get_double("plant.initial_thrust_minus")};
  p.seed = seed;
  return p;
}

AdaptationConfig adaptation_from(const Config& config) {
  AdaptationConfig a;
  a.window_ms = config.get_double("adapt.window_ms");
  a.mse_threshold_deg_sq = config.get_double("adapt.mse_threshold_deg_sq");
  a.error_weight_scale = config.get_double("adapt.error_weight_scale");
  a.bank_size = static_cast<std::uint32_t>(config.get_int("adapt.bank_size"));
  a.bank_bias = static_cast<std::int32_t>(config.get_int("adapt.bank_bias"));
  a.ff_gain = config.get_double("adapt.ff_gain");
  a.tick_ms = config.get_double("engine.timestep_us") *
              config.get_double("snn_pd.steps_per_tick") / 1000.0;
  return a;
}

OutputDecode output_decode_from(const Config& config) {
  OutputDecode d;
  d.bins = static_cast<std::uint32_t>(config.get_int("decode.bins"));
  d.u_min = config.get_double("decode.u_min");
  d.u_max = config.get_double("decode.u_max");
  return d;
}

ThrustMap thrust_map_from(const Config& config) {
  return {config.get_double("thrust.center"), config.get_double("thrust.bias")};
}

PdGains gains_from(const Config& config, const std::string& path) {
  return {config.get_double("gains." + path + ".kp"),
          config.get_double("gains." + path + ".kd")};
}

SnnPdConfig snn_pd_from(const Config& config, const PdGains& gains, bool adaptation) {
  SnnPdConfig s;
  s.kp = gains.kp;
  s.kd = gains.kd;
  s.bins = static_cast<std::uint32_t>(config.get_int("decode.bins"));
  s.error_range_deg = config.get_double("snn_pd.error_range_deg");
  s.rate_range_dps = config.get_double("snn_pd.rate_range_dps");
  s.coincidence_threshold =
      static_cast<std::int32_t>(config.get_int("snn_pd.coincidence_threshold"));
  s.grid_decay_tau = config.get_double("snn_pd.grid_decay_tau");
  s.timestep_us = config.get_int("engine.timestep_us");
  s.steps_per_tick = static_cast<std::uint32_t>(config.get_int("snn_pd.steps_per_tick"));
  s.adaptation = adaptation;
  s.adaptation_config = adaptation_from(config);
  return s;
}

}  // namespace neuroloop
