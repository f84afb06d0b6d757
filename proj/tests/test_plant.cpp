#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "neuroloop/errors.hpp"
#include "neuroloop/plant/disk.hpp"
#include "neuroloop/plant/plant.hpp"

using namespace neuroloop;

namespace {

PlantConfig quiet_config() {
  PlantConfig cfg;
  cfg.process_noise_nm = 0.0;
  cfg.encoder_noise_deg = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("motor thrust follows a first-order lag") {
  PlantConfig cfg = quiet_config();
  RollPlant plant(cfg);
  plant.command({3550.0, 2710.0});
  plant.step(2400);  // one motor time constant
  CHECK(plant.actual_thrust().plus == doctest::Approx(3550.0 - 500.0 * std::exp(-1.0)));
  CHECK(plant.actual_thrust().minus == doctest::Approx(2710.0));
}

TEST_CASE("command transport delay holds the old thrust") {
  PlantConfig cfg = quiet_config();
  cfg.pure_delay_ms = 5.0;
  RollPlant plant(cfg);
  plant.command({3550.0, 2710.0});
  plant.step(100);
  CHECK(plant.actual_thrust().plus == doctest::Approx(3050.0));
  plant.step(10);
  CHECK(plant.actual_thrust().plus > 3051.0);
}

TEST_CASE("counter torque balances the mixer bias at zero command") {
  RollPlant plant(quiet_config());
  plant.step(20000);
  CHECK(std::abs(plant.roll_deg()) < 1e-9);
  CHECK(std::abs(plant.roll_rate_dps()) < 1e-9);
}

TEST_CASE("free rotation decays through viscous friction") {
  PlantConfig cfg = quiet_config();
  cfg.counter_torque = 0.0;
  cfg.initial_thrust = {2880.0, 2880.0};
  cfg.initial_rate_dps = 100.0;
  RollPlant plant(cfg);
  plant.step(20000);
  const double lambda = cfg.viscous_friction / cfg.inertia;  // 1/s
  CHECK(plant.roll_rate_dps() == doctest::Approx(100.0 * std::exp(-lambda)).epsilon(1e-4));
  CHECK(plant.roll_deg() ==
        doctest::Approx(100.0 / lambda * (1.0 - std::exp(-lambda))).epsilon(1e-3));
}

TEST_CASE("encoder quantizes to its step size") {
  PlantConfig cfg = quiet_config();
  cfg.initial_roll_deg = 12.34;
  RollPlant plant(cfg);
  CHECK(plant.encoder_deg() == doctest::Approx(12.3));

  cfg.initial_roll_deg = -7.26;
  RollPlant negative(cfg);
  CHECK(negative.encoder_deg() == doctest::Approx(-7.3));
}

TEST_CASE("encoder noise is zero-mean at the configured sigma") {
  PlantConfig cfg;
  cfg.process_noise_nm = 0.0;
  cfg.seed = 42;
  RollPlant plant(cfg);
  double sum = 0.0;
  double sum_sq = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double v = plant.encoder_deg();
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sum_sq / n - mean * mean);
  CHECK(std::abs(mean) < 0.01);
  CHECK(stddev > 0.055);
  CHECK(stddev < 0.08);
}

TEST_CASE("non-finite commands surface as a simulation fault") {
  RollPlant plant(quiet_config());
  plant.command({std::numeric_limits<double>::quiet_NaN(), 2710.0});
  CHECK_THROWS_AS(plant.step(), SimulationFault);
}

TEST_CASE("identical seeds give identical trajectories") {
  PlantConfig cfg;
  cfg.seed = 9;
  RollPlant a(cfg);
  RollPlant b(cfg);
  for (int i = 0; i < 2000; ++i) {
    const MotorPair u{3050.0 + 2.0 * std::sin(0.01 * i), 2710.0};
    a.command(u);
    b.command(u);
    a.step();
    b.step();
    CHECK(a.encoder_deg() == b.encoder_deg());
  }
  CHECK(a.roll_deg() == b.roll_deg());
  CHECK(a.roll_rate_dps() == b.roll_rate_dps());
}

TEST_CASE("disk motion profiles") {
  SUBCASE("constant speed is an exact ramp") {
    DiskMotion disk = DiskMotion::constant_speed(400.0, 10.0);
    CHECK(disk.angle_deg(0) == doctest::Approx(10.0));
    CHECK(disk.angle_deg(500000) == doctest::Approx(210.0));
    CHECK(disk.rate_dps(123456) == doctest::Approx(400.0));
  }

  SUBCASE("step sequence holds each target") {
    DiskMotion disk = DiskMotion::step_sequence({10.0, -20.0, 45.0}, 2000000);
    CHECK(disk.angle_deg(0) == doctest::Approx(10.0));
    CHECK(disk.angle_deg(1999999) == doctest::Approx(10.0));
    CHECK(disk.angle_deg(2000000) == doctest::Approx(-20.0));
    CHECK(disk.angle_deg(4500000) == doctest::Approx(45.0));
    CHECK(disk.angle_deg(99000000) == doctest::Approx(45.0));
    CHECK(disk.rate_dps(2500000) == doctest::Approx(0.0));
  }
}
