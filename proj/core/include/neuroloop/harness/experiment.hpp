#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "neuroloop/harness/config.hpp"
#include "neuroloop/harness/metrics.hpp"

namespace neuroloop {

enum class Backend { kSnn, kCpu, kEncoder };
enum class ControllerKind { kCpuPd, kSnnPd, kSnnPdAdaptive };

std::string to_string(Backend backend);
std::string to_string(ControllerKind controller);
Backend backend_from_string(const std::string& name);
ControllerKind controller_from_string(const std::string& name);

struct ExperimentSpec {
  std::string scenario = "track";  // track | step | adapt | bench
  Backend backend = Backend::kSnn;
  ControllerKind controller = ControllerKind::kSnnPd;
  double speed_dps = 400.0;                // track
  std::vector<double> step_targets_deg{};  // step
  bool weight_on = true;                   // adapt
  std::uint64_t seed = 1;
  std::filesystem::path out_dir{};  // empty: keep results in memory only
  std::string events_path{};        // bench: recorded stream, empty = synthetic
  Config config = default_config();
};

/// Result of one closed-loop run. `stable` is false when the loop diverged;
/// the metrics then describe whatever was recorded up to the fault.
struct RunResult {
  bool stable = true;
  std::string diagnostic{};
  double rmse_deg = 0.0;  // delay-corrected for tracking, plain for adapt
  double raw_rmse_deg = 0.0;
  double delay_ms = 0.0;
  bool delay_valid = false;
  double mean_error_deg = 0.0;  // over the analysis window
  double final_roll_deg = 0.0;
  double final_ff = 0.0;
  double rise_time_ms = 0.0;   // step: slowest analyzed transition
  double overshoot_deg = 0.0;  // step: largest analyzed transition
  std::size_t transitions_reached = 0;
  std::size_t raw_estimate_count = 0;
  std::size_t control_tick_count = 0;
};

RunResult run_tracking(const ExperimentSpec& spec);
RunResult run_step(const ExperimentSpec& spec);

struct AdaptationRow {
  double setpoint_deg = 0.0;
  RunResult result{};
};

/// One independent 10 s hold per setpoint (+-20, +-30, +-40 degrees), on
/// direct encoder feedback, with the disturbance torque set by the spec's
/// weight flag. RMSE is against the setpoint over the whole run.
std::vector<AdaptationRow> run_adaptation(const ExperimentSpec& spec);

struct BenchResult {
  std::size_t event_count = 0;
  double wall_seconds = 0.0;       // excluded from deterministic outputs
  double events_per_second = 0.0;  // wall-clock, spiking backend
  double steps_per_second = 0.0;
  std::int64_t pipeline_latency_steps = 0;
  double snn_estimate_rate_hz = 0.0;  // simulated-time rates
  double cpu_estimate_rate_hz = 0.0;
};

BenchResult run_benchmark(const ExperimentSpec& spec);

}  // namespace neuroloop
