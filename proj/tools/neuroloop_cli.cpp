#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "neuroloop/harness/defaults.hpp"
#include "neuroloop/harness/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key = value file merged over the defaults")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "run seed")->capture_default_str();
  cmd->add_option("--out", args.out_dir, "output directory for CSVs and manifest");
}

neuroloop::ExperimentSpec base_spec(const CommonArgs& args, const std::string& scenario) {
  neuroloop::ExperimentSpec spec;
  spec.scenario = scenario;
  spec.seed = args.seed;
  spec.out_dir = args.out_dir;
  if (!args.config_path.empty()) spec.config.merge_file(args.config_path);
  return spec;
}

int report(const neuroloop::RunResult& result, const std::string& label) {
  if (!result.stable) {
    std::printf("%s UNSTABLE: %s\n", label.c_str(), result.diagnostic.c_str());
    return 2;
  }
  std::printf("%s rmse_deg=%.3f delay_ms=%.0f delay_valid=%d mean_error_deg=%.3f ff=%.1f\n",
              label.c_str(), result.rmse_deg, result.delay_ms, result.delay_valid ? 1 : 0,
              result.mean_error_deg, result.final_ff);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace neuroloop;

  CLI::App app{"Event-camera line tracking on a dual-rotor roll rig: spiking pipeline,\n"
               "conventional baseline, and adaptive control experiments."};
  app.require_subcommand(1);

  CommonArgs common;

  auto* track = app.add_subcommand("track", "constant-speed line tracking");
  double speed = 400.0;
  std::string backend = "snn";
  std::string track_controller;
  track->add_option("--speed", speed, "disk speed in deg/s")->capture_default_str();
  track->add_option("--backend", backend, "estimator backend: snn | cpu")->capture_default_str();
  track->add_option("--controller", track_controller,
                    "override the controller: pd | snn-pd | adaptive");
  add_common(track, common);

  auto* step = app.add_subcommand("step", "piecewise step targets on the disk");
  std::vector<double> targets;
  std::string step_backend = "snn";
  std::string step_controller = "pd";
  step->add_option("--targets", targets, "target angles in degrees")
      ->required()
      ->delimiter(',');
  step->add_option("--backend", step_backend, "estimator backend: snn | cpu")->capture_default_str();
  step->add_option("--controller", step_controller, "pd | snn-pd | adaptive")->capture_default_str();
  add_common(step, common);

  auto* adapt = app.add_subcommand("adapt", "setpoint holds with the added-weight torque");
  std::string weight = "on";
  std::string adapt_controller = "adaptive";
  adapt->add_option("--weight", weight, "disturbance weight: on | off")
      ->capture_default_str()
      ->check(CLI::IsMember({"on", "off"}));
  adapt->add_option("--controller", adapt_controller, "pd | adaptive")->capture_default_str();
  add_common(adapt, common);

  auto* bench = app.add_subcommand("bench", "pipeline throughput and latency");
  std::string events = "synth";
  bench->add_option("--events", events, "event file, or 'synth' for a generated stream")->capture_default_str();
  add_common(bench, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (track->parsed()) {
      ExperimentSpec spec = base_spec(common, "track");
      spec.backend = backend_from_string(backend);
      spec.speed_dps = speed;
      spec.controller = track_controller.empty()
                            ? (spec.backend == Backend::kSnn ? ControllerKind::kSnnPd
                                                             : ControllerKind::kCpuPd)
                            : controller_from_string(track_controller);
      const RunResult result = run_tracking(spec);
      return report(result, "track " + backend + " " + std::to_string(speed) + " deg/s:");
    }

    if (step->parsed()) {
      ExperimentSpec spec = base_spec(common, "step");
      spec.backend = backend_from_string(step_backend);
      spec.controller = controller_from_string(step_controller);
      spec.step_targets_deg = targets;
      const RunResult result = run_step(spec);
      const int code = report(result, "step " + step_backend + ":");
      if (code == 0) {
        std::printf("  transitions_reached=%zu rise_time_ms=%.0f overshoot_deg=%.2f\n",
                    result.transitions_reached, result.rise_time_ms, result.overshoot_deg);
      }
      return code;
    }

    if (adapt->parsed()) {
      ExperimentSpec spec = base_spec(common, "adapt");
      spec.backend = Backend::kEncoder;
      spec.controller = controller_from_string(adapt_controller);
      spec.weight_on = weight == "on";
      const auto rows = run_adaptation(spec);
      int code = 0;
      for (const AdaptationRow& row : rows) {
        const int c = report(row.result, "adapt setpoint " + std::to_string(row.setpoint_deg) +
                                             " weight=" + weight + ":");
        code = std::max(code, c);
      }
      return code;
    }

    if (bench->parsed()) {
      ExperimentSpec spec = base_spec(common, "bench");
      if (events != "synth") spec.events_path = events;
      const BenchResult result = run_benchmark(spec);
      std::printf("bench events=%zu wall_s=%.3f events_per_s=%.0f steps_per_s=%.0f\n",
                  result.event_count, result.wall_seconds, result.events_per_second,
                  result.steps_per_second);
      std::printf("  pipeline_latency_steps=%lld estimate_rates_hz snn=%.0f cpu=%.0f\n",
                  static_cast<long long>(result.pipeline_latency_steps),
                  result.snn_estimate_rate_hz, result.cpu_estimate_rate_hz);
      return result.pipeline_latency_steps > 0 ? 0 : 2;
    }
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 1;
  }
  return 0;
}
