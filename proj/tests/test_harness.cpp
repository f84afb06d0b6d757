#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "neuroloop/errors.hpp"
#include "neuroloop/harness/defaults.hpp"
#include "neuroloop/harness/experiment.hpp"

using namespace neuroloop;

TEST_CASE("backend and controller names round-trip") {
  for (Backend b : {Backend::kSnn, Backend::kCpu, Backend::kEncoder}) {
    CHECK(backend_from_string(to_string(b)) == b);
  }
  for (ControllerKind c :
       {ControllerKind::kCpuPd, ControllerKind::kSnnPd, ControllerKind::kSnnPdAdaptive}) {
    CHECK(controller_from_string(to_string(c)) == c);
  }
  CHECK(controller_from_string("adaptive") == ControllerKind::kSnnPdAdaptive);
  CHECK_THROWS_AS(backend_from_string("gpu"), ConfigError);
  CHECK_THROWS_AS(controller_from_string("pid"), ConfigError);
}

TEST_CASE("per-backend gains") {
  const Config cfg = default_config();
  const PdGains encoder = gains_from(cfg, "encoder");
  CHECK(encoder.kp == doctest::Approx(12.0));
  CHECK(encoder.kd == doctest::Approx(10.0));
  const PdGains snn = gains_from(cfg, "vision_snn");
  CHECK(snn.kp == doctest::Approx(34.9));
  CHECK(snn.kd == doctest::Approx(10.47));
  const PdGains cpu = gains_from(cfg, "vision_cpu");
  CHECK(cpu.kp == doctest::Approx(52.36));
  CHECK(cpu.kd == doctest::Approx(15.71));
}

TEST_CASE("tracking rejects an analysis window longer than the run") {
  ExperimentSpec spec;
  spec.config.merge_line("scenario.duration_s = 1");
  CHECK_THROWS_AS(run_tracking(spec), ConfigError);
}

TEST_CASE("tracking runs are reproducible") {
  ExperimentSpec spec;
  spec.backend = Backend::kSnn;
  spec.speed_dps = 400.0;
  spec.seed = 3;
  spec.config.merge_line("scenario.duration_s = 1");
  spec.config.merge_line("scenario.analysis_s = 0.5");

  const RunResult first = run_tracking(spec);
  const RunResult second = run_tracking(spec);
  CHECK(first.stable);
  CHECK(first.rmse_deg == second.rmse_deg);
  CHECK(first.delay_ms == second.delay_ms);
  CHECK(first.mean_error_deg == second.mean_error_deg);
  CHECK(first.control_tick_count == second.control_tick_count);
  CHECK(first.raw_estimate_count == second.raw_estimate_count);
  CHECK(first.control_tick_count == 1000);
}

TEST_CASE("tracking rejects the encoder backend") {
  ExperimentSpec spec;
  spec.backend = Backend::kEncoder;
  CHECK_THROWS_AS(run_tracking(spec), ConfigError);
}

TEST_CASE("run_step with a zero target stays put") {
  ExperimentSpec spec;
  spec.scenario = "step";
  spec.backend = Backend::kCpu;
  spec.step_targets_deg = {0.0};
  const RunResult r = run_step(spec);
  CHECK(r.stable);
  CHECK(r.transitions_reached == 0);
  CHECK(std::abs(r.final_roll_deg) < 1.5);
}

TEST_CASE("a run directory carries the full record") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "neuroloop_harness_test";
  fs::remove_all(dir);

  ExperimentSpec spec;
  spec.backend = Backend::kCpu;
  spec.out_dir = dir;
  spec.config.merge_line("scenario.duration_s = 1");
  spec.config.merge_line("scenario.analysis_s = 0.5");
  const RunResult r = run_tracking(spec);
  CHECK(r.stable);

  for (const char* name :
       {"config.txt", "control.csv", "estimates.csv", "truth.csv", "metrics.csv", "manifest.txt"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir / name));
    CHECK(fs::file_size(dir / name) > 0);
  }

  std::ifstream manifest(dir / "manifest.txt");
  std::string text((std::istreambuf_iterator<char>(manifest)), std::istreambuf_iterator<char>());
  CHECK(text.find("seed") != std::string::npos);
  CHECK(text.find("config_hash") != std::string::npos);
  fs::remove_all(dir);
}
