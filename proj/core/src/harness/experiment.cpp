#include "neuroloop/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <utility>

#include "neuroloop/common/angle.hpp"
#include "neuroloop/control/decode.hpp"
#include "neuroloop/control/snn_pd.hpp"
#include "neuroloop/errors.hpp"
#include "neuroloop/events/event_io.hpp"
#include "neuroloop/events/synth.hpp"
#include "neuroloop/harness/defaults.hpp"
#include "neuroloop/plant/disk.hpp"
#include "neuroloop/plant/plant.hpp"
#include "neuroloop/vision/cpu_estimator.hpp"
#include "neuroloop/vision/hough_network.hpp"
#include "neuroloop/vision/sliding_average.hpp"
#include "neuroloop/vision/snn_estimator.hpp"

namespace neuroloop {
namespace {

namespace fs = std::filesystem;

constexpr char kVersion[] = "0.1.0";
constexpr double kRateLimitDps = 50000.0;  // beyond this the run counts as diverged
constexpr std::uint64_t kDiskEncoderSalt = 0x5deece66dull;
constexpr std::uint64_t kSetpointSalt = 0x9e3779b97f4a7c15ull;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Quantizing encoder with Gaussian read noise, matching the plant's own
/// encoder model; used for the disk side of the metric.
class EncoderModel {
 public:
  EncoderModel(double step_deg, double noise_deg, std::uint64_t seed)
      : step_(step_deg), sigma_(noise_deg), rng_(seed), noise_(0.0, noise_deg > 0.0 ? noise_deg : 1.0) {}

  double read(double angle_deg) {
    double value = step_ > 0.0 ? std::round(angle_deg / step_) * step_ : angle_deg;
    if (sigma_ > 0.0) value += noise_(rng_);
    return value;
  }

 private:
  double step_;
  double sigma_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_;
};

struct TruthRow {
  std::int64_t t_us = 0;
  double roll = 0, rate = 0, disk = 0, thrust_l = 0, thrust_r = 0;
};

struct ControlRow {
  double t_ms = 0;
  double theta = 0, theta_dot = 0, u = 0, thrust_l = 0, thrust_r = 0, ff = 0;
};

struct EstimateRow {
  std::int64_t t_us = 0;
  double theta = 0;
  bool valid = false;
};

struct LoopTraces {
  std::vector<TruthRow> truth;
  std::vector<ControlRow> control;
  std::vector<EstimateRow> estimates;
  std::vector<double> disk_enc;    // 1 kHz encoder readings, metric inputs
  std::vector<double> roll_enc;
  std::vector<double> roll_truth;  // 1 kHz true roll
  bool keep_estimates = true;
};

void write_truth_csv(const fs::path& path, const std::vector<TruthRow>& rows) {
  std::ofstream out(path);
  out << "time_us,roll_deg,roll_rate,disk_deg,thrust_l,thrust_r\n";
  for (const TruthRow& r : rows) {
    out << r.t_us << ',' << fmt(r.roll) << ',' << fmt(r.rate) << ',' << fmt(r.disk) << ','
        << fmt(r.thrust_l) << ',' << fmt(r.thrust_r) << '\n';
  }
}

void write_control_csv(const fs::path& path, const std::vector<ControlRow>& rows) {
  std::ofstream out(path);
  out << "time_ms,theta,theta_dot,u,thrust_l,thrust_r,ff_term\n";
  for (const ControlRow& r : rows) {
    out << fmt(r.t_ms) << ',' << fmt(r.theta) << ',' << fmt(r.theta_dot) << ',' << fmt(r.u)
        << ',' << fmt(r.thrust_l) << ',' << fmt(r.thrust_r) << ',' << fmt(r.ff) << '\n';
  }
}

void write_estimates_csv(const fs::path& path, const std::vector<EstimateRow>& rows,
                         const std::string& backend) {
  std::ofstream out(path);
  out << "time_us,theta_deg,valid,backend\n";
  for (const EstimateRow& r : rows) {
    out << r.t_us << ',' << fmt(r.theta) << ',' << (r.valid ? 1 : 0) << ',' << backend << '\n';
  }
}

void write_metrics_csv(const fs::path& path,
                       const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ofstream out(path);
  out << "metric,value\n";
  for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
}

void write_manifest(const fs::path& dir, const ExperimentSpec& spec,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ofstream out(dir / "manifest.txt");
  out << "scenario = " << spec.scenario << '\n';
  out << "backend = " << to_string(spec.backend) << '\n';
  out << "controller = " << to_string(spec.controller) << '\n';
  out << "seed = " << spec.seed << '\n';
  for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
  out << "config_hash = " << hex64(spec.config.hash()) << '\n';
  out << "version = " << kVersion << '\n';
}

void write_config_dump(const fs::path& dir, const Config& config) {
  std::ofstream out(dir / "config.txt");
  config.write(out);
}

void write_plot_stub(const fs::path& dir) {
  std::ofstream out(dir / "plot.py");
  out << R"(#!/usr/bin/env python3
"""Quick-look plots for this run directory (requires matplotlib)."""
import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))


def load(name):
    with open(os.path.join(here, name)) as f:
        return list(csv.DictReader(f))


truth = load("truth.csv")
t = [float(r["time_us"]) * 1e-6 for r in truth]
fig, (ax_angle, ax_u) = plt.subplots(2, 1, sharex=True, figsize=(10, 7))
ax_angle.plot(t, [float(r["disk_deg"]) for r in truth], label="disk")
ax_angle.plot(t, [float(r["roll_deg"]) for r in truth], label="roll")
ax_angle.set_ylabel("angle [deg]")
ax_angle.legend()
ax_angle.grid(True)

control = load("control.csv")
tc = [float(r["time_ms"]) * 1e-3 for r in control]
ax_u.plot(tc, [float(r["u"]) for r in control], label="u")
ax_u.plot(tc, [float(r["ff_term"]) for r in control], label="ff")
ax_u.set_xlabel("time [s]")
ax_u.set_ylabel("command [units]")
ax_u.legend()
ax_u.grid(True)

fig.savefig(os.path.join(here, "run.png"), dpi=120)
print("wrote", os.path.join(here, "run.png"))
)";
}

void write_run_dir(const fs::path& dir, const ExperimentSpec& spec, const LoopTraces& traces,
                   const std::vector<std::pair<std::string, std::string>>& manifest_extra,
                   const std::vector<std::pair<std::string, std::string>>& metrics) {
  fs::create_directories(dir);
  write_manifest(dir, spec, manifest_extra);
  write_config_dump(dir, spec.config);
  write_truth_csv(dir / "truth.csv", traces.truth);
  write_control_csv(dir / "control.csv", traces.control);
  if (traces.keep_estimates) {
    write_estimates_csv(dir / "estimates.csv", traces.estimates, to_string(spec.backend));
  }
  write_metrics_csv(dir / "metrics.csv", metrics);
  write_plot_stub(dir);
}

std::string gain_path(Backend backend) {
  switch (backend) {
    case Backend::kSnn: return "vision_snn";
    case Backend::kCpu: return "vision_cpu";
    case Backend::kEncoder: return "encoder";
  }
  throw ConfigError("unknown backend");
}

/// Uniform view over the three controller kinds for the loop code.
struct Controller {
  std::function<double(double, double)> tick;  // (error_deg, rate_dps) -> command
  std::function<double()> feed_forward = [] { return 0.0; };
};

Controller make_controller(const ExperimentSpec& spec, const PdGains& gains) {
  if (spec.controller == ControllerKind::kCpuPd) {
    return {[gains](double e, double r) { return pd_command(gains, e, r); }};
  }
  const bool adaptive = spec.controller == ControllerKind::kSnnPdAdaptive;
  auto ctrl = std::make_shared<SnnPdController>(snn_pd_from(spec.config, gains, adaptive));
  return {[ctrl](double e, double r) { return ctrl->tick(e, r); },
          [ctrl] { return ctrl->feed_forward(); }};
}

/// Full vision-in-the-loop simulation: event camera -> estimator -> sliding
/// average (spiking backend) -> PD controller -> thrust mixer -> plant, in
/// lockstep at the engine timestep, with one control tick per averaging
/// stride. Estimates are unwrapped across the +-90 degree seam before
/// averaging and differentiation so a rotating line stays continuous; the
/// controller always sees the wrapped line error. disk_angle gives the true
/// disk orientation at any microsecond; mount vibration scales with the
/// nominal drive speed on top of the rotor-induced base jitter, and the
/// drive motor feeds a speed-proportional vibration torque into the stand.
RunResult vision_loop(const ExperimentSpec& spec,
                      const std::function<double(std::int64_t)>& disk_angle,
                      double disk_speed_dps, std::int64_t duration_us, LoopTraces& traces) {
  const Config& config = spec.config;
  const std::int64_t dt_us = config.get_int("engine.timestep_us");
  const auto stride = static_cast<std::int64_t>(config.get_int("average.stride"));
  const std::int64_t tick_us = dt_us * stride;
  const std::int64_t n_steps = duration_us / dt_us;

  EventSynthesizer synth(scene_from(config, spec.seed));
  const double vib_amp =
      config.get_double("rig.vibration_amp_deg") +
      config.get_double("rig.vibration_speed_coeff") * std::abs(disk_speed_dps);
  const double vib_omega = 2.0 * kPi * config.get_double("rig.vibration_hz") * 1e-6;
  std::unique_ptr<SnnLineEstimator> snn;
  std::unique_ptr<CpuLineEstimator> cpu;
  if (spec.backend == Backend::kSnn) {
    snn = std::make_unique<SnnLineEstimator>(vision_net_from(config), dt_us);
  } else {
    cpu = std::make_unique<CpuLineEstimator>(cpu_estimator_from(config));
  }
  SlidingAverage average(static_cast<std::size_t>(config.get_int("average.window")),
                         static_cast<std::size_t>(stride));
  RateEstimator rate_estimator(static_cast<std::size_t>(config.get_int("rate.lag")),
                               static_cast<double>(tick_us) * 1e-6);
  Controller controller = make_controller(spec, gains_from(config, gain_path(spec.backend)));
  ThrustMap mixer = thrust_map_from(config);
  PlantConfig plant_config = plant_from(config, spec.seed);
  plant_config.process_noise_nm +=
      config.get_double("plant.drive_noise_coupling") * std::abs(disk_speed_dps);
  RollPlant plant(plant_config);
  EncoderModel disk_encoder(config.get_double("plant.encoder_step_deg"),
                            config.get_double("plant.encoder_noise_deg"),
                            spec.seed ^ kDiskEncoderSalt);

  RunResult result;
  std::vector<DvsEvent> events;
  double raw_prev = 0.0, raw_cont = 0.0;  // unwrapped raw estimate series
  double held_theta = 0.0;                // controller input, continuous units
  const std::size_t expected_ticks = static_cast<std::size_t>(n_steps / stride);
  traces.disk_enc.reserve(expected_ticks);
  traces.roll_enc.reserve(expected_ticks);
  traces.roll_truth.reserve(expected_ticks);

  try {
    for (std::int64_t k = 0; k < n_steps; ++k) {
      const std::int64_t t1 = (k + 1) * dt_us;
      const double roll_hold = plant.roll_deg();
      events.clear();
      synth.advance(
          t1,
          [&](std::int64_t t) {
            return disk_angle(t) - roll_hold +
                   vib_amp * std::sin(vib_omega * static_cast<double>(t));
          },
          events);

      if (snn) {
        snn->push_events(events);
        snn->advance_to(t1);
        const AngleEstimate& raw = snn->estimate();
        raw_cont += std::remainder(raw.theta_deg - raw_prev, 180.0);
        raw_prev = raw.theta_deg;
        if (auto emitted = average.push(raw_cont)) held_theta = *emitted;
        ++result.raw_estimate_count;
        if (traces.keep_estimates) traces.estimates.push_back({t1, raw.theta_deg, raw.valid});
      } else {
        cpu->push_events(events);
        cpu->advance_to(t1);
      }

      plant.step();

      if ((k + 1) % stride != 0) continue;
      if (cpu) {
        const AngleEstimate& raw = cpu->estimate();
        raw_cont += std::remainder(raw.theta_deg - raw_prev, 180.0);
        raw_prev = raw.theta_deg;
        held_theta = raw_cont;
        ++result.raw_estimate_count;
        if (traces.keep_estimates) {
          traces.estimates.push_back({t1, raw.theta_deg, cpu->last_evaluation_valid()});
        }
      }

      const double error = wrap_line_angle(held_theta);
      const double rate = rate_estimator.push(held_theta);
      const double u = controller.tick(error, rate);
      const MotorPair thrust = mixer.thrust(u);
      plant.command(thrust);

      const double disk_true = disk_angle(t1);
      traces.disk_enc.push_back(disk_encoder.read(disk_true));
      traces.roll_enc.push_back(plant.encoder_deg());
      traces.roll_truth.push_back(plant.roll_deg());
      traces.truth.push_back({t1, plant.roll_deg(), plant.roll_rate_dps(), disk_true,
                              plant.actual_thrust().minus, plant.actual_thrust().plus});
      traces.control.push_back({static_cast<double>(t1) * 1e-3, error, rate, u, thrust.minus,
                                thrust.plus, controller.feed_forward()});
      ++result.control_tick_count;

      if (std::abs(plant.roll_rate_dps()) > kRateLimitDps) {
        result.stable = false;
        result.diagnostic = "roll rate exceeded " + fmt(kRateLimitDps) + " deg/s at t_us=" +
                            std::to_string(t1);
        break;
      }
    }
  } catch (const SimulationFault& fault) {
    result.stable = false;
    result.diagnostic = fault.what();
  }

  result.final_roll_deg = plant.roll_deg();
  result.final_ff = controller.feed_forward();
  return result;
}

/// Encoder-direct regulation loop at the control rate: the error is the
/// setpoint minus the roll encoder reading, no vision in the path.
RunResult encoder_loop(const ExperimentSpec& spec, double setpoint_deg, double disturbance_nm,
                       std::uint64_t seed, std::int64_t duration_us, LoopTraces& traces,
                       std::vector<double>& error_samples) {
  const Config& config = spec.config;
  const std::int64_t dt_us = config.get_int("engine.timestep_us");
  const auto stride = static_cast<std::int64_t>(config.get_int("average.stride"));
  const std::int64_t tick_us = dt_us * stride;
  const std::int64_t n_ticks = duration_us / tick_us;

  RateEstimator rate_estimator(static_cast<std::size_t>(config.get_int("rate.lag")),
                               static_cast<double>(tick_us) * 1e-6);
  Controller controller = make_controller(spec, gains_from(config, gain_path(Backend::kEncoder)));
  ThrustMap mixer = thrust_map_from(config);
  RollPlant plant(plant_from(config, seed));
  plant.set_disturbance(disturbance_nm);

  RunResult result;
  traces.keep_estimates = false;
  error_samples.reserve(static_cast<std::size_t>(n_ticks));

  try {
    for (std::int64_t tick = 0; tick < n_ticks; ++tick) {
      const std::int64_t t_us = tick * tick_us;
      const double error = setpoint_deg - plant.encoder_deg();
      const double rate = rate_estimator.push(error);
      const double u = controller.tick(error, rate);
      const MotorPair thrust = mixer.thrust(u);
      plant.command(thrust);

      error_samples.push_back(error);
      traces.roll_truth.push_back(plant.roll_deg());
      traces.truth.push_back({t_us, plant.roll_deg(), plant.roll_rate_dps(), setpoint_deg,
                              plant.actual_thrust().minus, plant.actual_thrust().plus});
      traces.control.push_back({static_cast<double>(t_us) * 1e-3, error, rate, u, thrust.minus,
                                thrust.plus, controller.feed_forward()});
      ++result.control_tick_count;

      for (std::int64_t j = 0; j < stride; ++j) plant.step();

      if (std::abs(plant.roll_rate_dps()) > kRateLimitDps) {
        result.stable = false;
        result.diagnostic = "roll rate exceeded " + fmt(kRateLimitDps) + " deg/s at t_us=" +
                            std::to_string(t_us);
        break;
      }
    }
  } catch (const SimulationFault& fault) {
    result.stable = false;
    result.diagnostic = fault.what();
  }

  result.final_roll_deg = plant.roll_deg();
  result.final_ff = controller.feed_forward();
  return result;
}

void fill_tracking_metrics(RunResult& result, const LoopTraces& traces,
                           std::size_t analysis_start, int max_shift_ms = 300) {
  if (traces.disk_enc.size() <= analysis_start) return;
  const DelayFit fit = delay_corrected_rmse(traces.disk_enc, traces.roll_enc, analysis_start,
                                            180.0, max_shift_ms);
  result.rmse_deg = fit.rmse_deg;
  result.raw_rmse_deg = fit.raw_rmse_deg;
  result.delay_ms = fit.delay_ms;
  result.delay_valid = fit.delay_valid;

  const auto shift = static_cast<std::size_t>(fit.delay_ms);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = std::max(analysis_start, shift); i < traces.roll_enc.size(); ++i) {
    sum += std::remainder(traces.roll_enc[i] - traces.disk_enc[i - shift], 180.0);
    ++count;
  }
  if (count > 0) result.mean_error_deg = sum / static_cast<double>(count);
}

std::vector<std::pair<std::string, std::string>> run_metric_rows(const RunResult& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("stable", r.stable ? "1" : "0");
  rows.emplace_back("rmse_deg", fmt(r.rmse_deg));
  rows.emplace_back("raw_rmse_deg", fmt(r.raw_rmse_deg));
  rows.emplace_back("delay_ms", fmt(r.delay_ms));
  rows.emplace_back("delay_valid", r.delay_valid ? "1" : "0");
  rows.emplace_back("mean_error_deg", fmt(r.mean_error_deg));
  rows.emplace_back("final_roll_deg", fmt(r.final_roll_deg));
  rows.emplace_back("final_ff", fmt(r.final_ff));
  rows.emplace_back("raw_estimate_count", std::to_string(r.raw_estimate_count));
  rows.emplace_back("control_tick_count", std::to_string(r.control_tick_count));
  return rows;
}

std::string setpoint_tag(double setpoint) {
  const auto magnitude = static_cast<long long>(std::llround(std::abs(setpoint)));
  return std::string("sp_") + (setpoint < 0 ? 'm' : 'p') + std::to_string(magnitude);
}

}  // namespace

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::kSnn: return "snn";
    case Backend::kCpu: return "cpu";
    case Backend::kEncoder: return "encoder";
  }
  throw ConfigError("unknown backend");
}

std::string to_string(ControllerKind controller) {
  switch (controller) {
    case ControllerKind::kCpuPd: return "pd";
    case ControllerKind::kSnnPd: return "snn-pd";
    case ControllerKind::kSnnPdAdaptive: return "adaptive";
  }
  throw ConfigError("unknown controller");
}

Backend backend_from_string(const std::string& name) {
  if (name == "snn") return Backend::kSnn;
  if (name == "cpu") return Backend::kCpu;
  if (name == "encoder") return Backend::kEncoder;
  throw ConfigError("unknown backend '" + name + "' (expected snn, cpu or encoder)");
}

ControllerKind controller_from_string(const std::string& name) {
  if (name == "pd" || name == "cpu-pd") return ControllerKind::kCpuPd;
  if (name == "snn-pd") return ControllerKind::kSnnPd;
  if (name == "adaptive" || name == "snn-pd-adaptive") return ControllerKind::kSnnPdAdaptive;
  throw ConfigError("unknown controller '" + name + "' (expected pd, snn-pd or adaptive)");
}

RunResult run_tracking(const ExperimentSpec& spec) {
  if (spec.backend == Backend::kEncoder) {
    throw ConfigError("tracking needs a vision backend (snn or cpu)");
  }
  const Config& config = spec.config;
  const double duration_s = config.get_double("scenario.duration_s");
  const double analysis_s = config.get_double("scenario.analysis_s");
  if (analysis_s > duration_s) throw ConfigError("analysis window exceeds run duration");
  const auto duration_us = static_cast<std::int64_t>(duration_s * 1e6);
  const std::int64_t tick_us =
      config.get_int("engine.timestep_us") * config.get_int("average.stride");
  const auto analysis_start =
      static_cast<std::size_t>(static_cast<std::int64_t>((duration_s - analysis_s) * 1e6) / tick_us);

  const double ripple_hz = config.get_double("disk.ripple_hz");
  const double ripple_omega = 2.0 * kPi * ripple_hz * 1e-6;
  const double ripple_amp =
      ripple_hz > 0.0
          ? spec.speed_dps * config.get_double("disk.ripple_frac") / (2.0 * kPi * ripple_hz)
          : 0.0;
  const auto disk_angle = [speed = spec.speed_dps, ripple_amp, ripple_omega](std::int64_t t_us) {
    const double t = static_cast<double>(t_us);
    return speed * t * 1e-6 + ripple_amp * (1.0 - std::cos(ripple_omega * t));
  };

  LoopTraces traces;
  RunResult result = vision_loop(spec, disk_angle, spec.speed_dps, duration_us, traces);
  // On a wrapped line rotating at omega, shifts past a half turn (180/omega)
  // repeat the zero-shift residual, so only the identifiable range is searched.
  const int max_shift_ms =
      spec.speed_dps != 0.0
          ? std::min(300, static_cast<int>(0.9 * 180000.0 / std::abs(spec.speed_dps)))
          : 300;
  if (result.stable) fill_tracking_metrics(result, traces, analysis_start, max_shift_ms);

  if (!spec.out_dir.empty()) {
    write_run_dir(spec.out_dir, spec, traces, {{"speed_dps", fmt(spec.speed_dps)}},
                  run_metric_rows(result));
  }
  return result;
}

RunResult run_step(const ExperimentSpec& spec) {
  if (spec.backend == Backend::kEncoder) {
    throw ConfigError("the step scenario needs a vision backend (snn or cpu)");
  }
  if (spec.step_targets_deg.empty()) throw ConfigError("step scenario needs at least one target");
  const Config& config = spec.config;
  const auto hold_us = static_cast<std::int64_t>(config.get_double("scenario.step_hold_ms") * 1e3);
  const std::int64_t tick_us =
      config.get_int("engine.timestep_us") * config.get_int("average.stride");

  std::vector<double> targets{0.0};  // start on the resting line
  targets.insert(targets.end(), spec.step_targets_deg.begin(), spec.step_targets_deg.end());
  const DiskMotion disk = DiskMotion::step_sequence(targets, hold_us);
  const std::int64_t duration_us = hold_us * static_cast<std::int64_t>(targets.size());

  LoopTraces traces;
  RunResult result = vision_loop(
      spec, [&disk](std::int64_t t) { return disk.angle_deg(t); }, 0.0, duration_us, traces);

  const auto hold_ticks = static_cast<std::size_t>(hold_us / tick_us);
  if (result.stable && traces.roll_truth.size() > hold_ticks) {
    fill_tracking_metrics(result, traces, hold_ticks);
    const std::span<const double> roll(traces.roll_truth);
    for (std::size_t i = 1; i < targets.size(); ++i) {
      if (targets[i] == targets[i - 1]) continue;
      const std::size_t start = i * hold_ticks;
      if (start >= roll.size()) break;
      const std::size_t len = std::min(hold_ticks, roll.size() - start);
      const StepMetrics sm = step_metrics(roll.subspan(start, len), 0, targets[i - 1], targets[i]);
      result.overshoot_deg = std::max(result.overshoot_deg, sm.overshoot_deg);
      if (sm.reached) {
        result.rise_time_ms = std::max(result.rise_time_ms, sm.rise_time_ms);
        ++result.transitions_reached;
      }
    }
  }

  if (!spec.out_dir.empty()) {
    std::string list;
    for (double t : spec.step_targets_deg) {
      if (!list.empty()) list += ' ';
      list += fmt(t);
    }
    auto metrics = run_metric_rows(result);
    metrics.emplace_back("rise_time_ms", fmt(result.rise_time_ms));
    metrics.emplace_back("overshoot_deg", fmt(result.overshoot_deg));
    metrics.emplace_back("transitions_reached", std::to_string(result.transitions_reached));
    write_run_dir(spec.out_dir, spec, traces, {{"targets_deg", list}}, metrics);
  }
  return result;
}

std::vector<AdaptationRow> run_adaptation(const ExperimentSpec& spec) {
  const Config& config = spec.config;
  const double duration_s = config.get_double("scenario.duration_s");
  const double analysis_s = config.get_double("scenario.analysis_s");
  const auto duration_us = static_cast<std::int64_t>(duration_s * 1e6);
  const double weight_torque = spec.weight_on ? config.get_double("weight.torque_nm") : 0.0;

  const std::vector<double> setpoints{20.0, -20.0, 30.0, -30.0, 40.0, -40.0};
  std::vector<AdaptationRow> rows;
  std::vector<std::pair<std::string, std::string>> all_metrics;

  for (std::size_t i = 0; i < setpoints.size(); ++i) {
    const double setpoint = setpoints[i];
    const std::uint64_t run_seed = spec.seed ^ ((i + 1) * kSetpointSalt);
    LoopTraces traces;
    std::vector<double> errors;
    RunResult result = encoder_loop(spec, setpoint, weight_torque, run_seed, duration_us,
                                    traces, errors);
    result.rmse_deg = rmse(errors);
    result.raw_rmse_deg = result.rmse_deg;
    const auto analysis_start = static_cast<std::size_t>(
        (duration_s - analysis_s) / duration_s * static_cast<double>(errors.size()));
    if (errors.size() > analysis_start) {
      result.mean_error_deg =
          mean(std::span<const double>(errors).subspan(analysis_start));
    }

    const std::string tag = setpoint_tag(setpoint);
    if (!spec.out_dir.empty()) {
      const fs::path dir = spec.out_dir / tag;
      fs::create_directories(dir);
      write_truth_csv(dir / "truth.csv", traces.truth);
      write_control_csv(dir / "control.csv", traces.control);
      write_plot_stub(dir);
    }
    for (const auto& [k, v] : run_metric_rows(result)) all_metrics.emplace_back(tag + "." + k, v);
    rows.push_back({setpoint, std::move(result)});
  }

  if (!spec.out_dir.empty()) {
    fs::create_directories(spec.out_dir);
    write_manifest(spec.out_dir, spec,
                   {{"weight", spec.weight_on ? "on" : "off"},
                    {"weight_torque_nm", fmt(weight_torque)}});
    write_config_dump(spec.out_dir, spec.config);
    write_metrics_csv(spec.out_dir / "metrics.csv", all_metrics);
  }
  return rows;
}

BenchResult run_benchmark(const ExperimentSpec& spec) {
  const Config& config = spec.config;
  const std::int64_t dt_us = config.get_int("engine.timestep_us");

  std::vector<DvsEvent> events;
  std::int64_t stream_end_us = 0;
  if (spec.events_path.empty()) {
    const double speed = config.get_double("bench.speed_dps");
    stream_end_us = static_cast<std::int64_t>(config.get_double("bench.duration_s") * 1e6);
    events = synthesize_events(scene_from(config, spec.seed), stream_end_us,
                               [speed](std::int64_t t) {
                                 return speed * static_cast<double>(t) * 1e-6;
                               });
  } else {
    events = load_events(spec.events_path);
    if (events.empty()) throw InputError("event file '" + spec.events_path + "' is empty");
    stream_end_us = events.back().t_us + dt_us;
  }

  BenchResult bench;
  bench.event_count = events.size();

  {
    SnnLineEstimator estimator(vision_net_from(config), dt_us);
    const auto t0 = std::chrono::steady_clock::now();
    estimator.push_events(events);
    estimator.advance_to(stream_end_us);
    const auto t1 = std::chrono::steady_clock::now();
    bench.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    if (bench.wall_seconds > 0.0) {
      bench.events_per_second = static_cast<double>(events.size()) / bench.wall_seconds;
      bench.steps_per_second =
          static_cast<double>(stream_end_us / dt_us) / bench.wall_seconds;
    }
  }

  {
    // Inject one super-threshold collinear volley and count the steps until
    // the memory layer reports it.
    const VisionNetConfig vis = vision_net_from(config);
    VisionNetwork net = build_vision_network(vis);
    const std::uint32_t memory = net.memory;
    const std::uint32_t cartesian = net.cartesian;
    const HoughGrid grid(vis.grid);
    Engine engine(EngineConfig{dt_us, 0}, std::move(net.network));

    SpikeBatch volley;
    volley.timestep = engine.next_timestep();
    const double theta = deg_to_rad(grid.theta_center_deg(grid.theta_bins() / 2));
    for (std::uint16_t y = 0; y < vis.grid.frame_height && volley.spikes.size() < 30; ++y) {
      for (std::uint16_t x = 0; x < vis.grid.frame_width && volley.spikes.size() < 30; ++x) {
        double cx = 0, cy = 0;
        grid.pixel_coord(x, y, cx, cy);
        if (std::abs(cx * std::cos(theta) + cy * std::sin(theta)) <= vis.grid.r_step_px / 2.0) {
          volley.spikes.push_back({cartesian, grid.pixel_index(x, y)});
        }
      }
    }
    const Timestep start = volley.timestep;
    engine.step(volley);
    bench.pipeline_latency_steps = -1;
    for (int k = 1; k <= 20 && bench.pipeline_latency_steps < 0; ++k) {
      const SpikeBatch& out = engine.step();
      for (const Spike& s : out.spikes) {
        if (s.population == memory) {
          bench.pipeline_latency_steps = out.timestep - start;
          break;
        }
      }
    }
  }

  bench.snn_estimate_rate_hz = 1e6 / static_cast<double>(dt_us);
  bench.cpu_estimate_rate_hz = 1e6 / static_cast<double>(config.get_int("cpu_estimator.period_us"));

  if (!spec.out_dir.empty()) {
    fs::create_directories(spec.out_dir);
    write_manifest(spec.out_dir, spec,
                   {{"events", spec.events_path.empty() ? "synth" : spec.events_path}});
    write_config_dump(spec.out_dir, spec.config);
    write_metrics_csv(
        spec.out_dir / "metrics.csv",
        {{"event_count", std::to_string(bench.event_count)},
         {"pipeline_latency_steps", std::to_string(bench.pipeline_latency_steps)},
         {"snn_estimate_rate_hz", fmt(bench.snn_estimate_rate_hz)},
         {"cpu_estimate_rate_hz", fmt(bench.cpu_estimate_rate_hz)},
         {"estimate_rate_ratio",
          fmt(bench.snn_estimate_rate_hz / bench.cpu_estimate_rate_hz)}});
    // Wall-clock figures change run to run, so they live outside the
    // deterministic outputs.
    std::ofstream timing(spec.out_dir / "timing.txt");
    timing << "wall_seconds = " << fmt(bench.wall_seconds) << '\n';
    timing << "events_per_second = " << fmt(bench.events_per_second) << '\n';
    timing << "steps_per_second = " << fmt(bench.steps_per_second) << '\n';
  }
  return bench;
}

}  // namespace neuroloop
