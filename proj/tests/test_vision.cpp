#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "neuroloop/errors.hpp"
#include "neuroloop/vision/cpu_estimator.hpp"
#include "neuroloop/vision/hough_grid.hpp"
#include "neuroloop/vision/hough_network.hpp"
#include "neuroloop/vision/sliding_average.hpp"
#include "neuroloop/vision/snn_estimator.hpp"

using namespace neuroloop;

namespace {

// Full-resolution events whose downsampled pixels sit within half an r bin of
// the line through the image center with the given normal angle. Samples are
// spread over the whole line so the peak stays confined to nearby columns.
std::vector<DvsEvent> line_volley(const HoughGrid& grid, double theta_deg, std::size_t count,
                                  std::int64_t t_us) {
  std::vector<std::pair<std::uint16_t, std::uint16_t>> pixels;
  for (std::uint16_t y = 0; y < grid.config().frame_height; ++y) {
    for (std::uint16_t x = 0; x < grid.config().frame_width; ++x) {
      double cx = 0.0, cy = 0.0;
      grid.pixel_coord(x, y, cx, cy);
      if (std::abs(grid.r_of(cx, cy, theta_deg)) < 0.49 * grid.config().r_step_px) {
        pixels.emplace_back(x, y);
      }
    }
  }
  std::vector<DvsEvent> events;
  const std::size_t n = std::min(count, pixels.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& [x, y] = pixels[k * pixels.size() / n];
    events.push_back({t_us, static_cast<std::uint16_t>(x * 4 + 1),
                      static_cast<std::uint16_t>(y * 4 + 1), true});
  }
  return events;
}

}  // namespace

TEST_CASE("hough grid discretization") {
  HoughGrid grid({});
  CHECK(grid.theta_bins() == 90);
  CHECK(grid.r_bins() == 41);
  CHECK(grid.cell_count() == 3690);
  CHECK(grid.theta_center_deg(0) == doctest::Approx(-89.0));
  CHECK(grid.theta_center_deg(44) == doctest::Approx(-1.0));
  CHECK(grid.theta_center_deg(89) == doctest::Approx(89.0));
  CHECK(grid.theta_index(31.0) == 60);

  CHECK(grid.r_bin_of(0.0) == 20);
  CHECK(grid.r_bin_low(20) == doctest::Approx(-5.0));
  CHECK(grid.r_bin_high(20) == doctest::Approx(5.0));
  CHECK(grid.r_bin_of(-200.0) == 0);
  CHECK(grid.r_bin_of(203.0) == 40);
  CHECK_THROWS_AS(grid.r_bin_of(250.0), InputError);
}

TEST_CASE("pixel coordinates are center-origin full-resolution units") {
  HoughGrid grid({});
  double cx = 0.0, cy = 0.0;
  grid.pixel_coord(0, 0, cx, cy);
  const double left = cx;
  grid.pixel_coord(59, 44, cx, cy);
  // Symmetric frame: opposite corners mirror through the origin.
  CHECK(left == doctest::Approx(-cx));
  grid.pixel_coord(29, 22, cx, cy);
  CHECK(std::abs(cx) <= 2.0);
  CHECK(std::abs(cy) <= 2.0);
}

TEST_CASE("connectivity sends each pixel vote to the bin holding its distance") {
  HoughGrid grid({});
  const auto edges = grid.connectivity(1);
  REQUIRE(!edges.empty());

  // Index edges by (pixel, theta column) for the spot checks.
  std::vector<std::uint32_t> cell_of(grid.pixel_count() * grid.theta_bins(), 0xffffffffu);
  for (const auto& e : edges) {
    const std::uint32_t theta = e.post / grid.r_bins();
    cell_of[e.pre * grid.theta_bins() + theta] = e.post;
    CHECK(e.weight == 1);
  }

  std::mt19937 rng(1234);
  std::uniform_int_distribution<std::uint32_t> px(0, 59), py(0, 44), pt(0, 89);
  for (int k = 0; k < 200; ++k) {
    const std::uint16_t x = static_cast<std::uint16_t>(px(rng));
    const std::uint16_t y = static_cast<std::uint16_t>(py(rng));
    const std::uint32_t theta = pt(rng);
    double cx = 0.0, cy = 0.0;
    grid.pixel_coord(x, y, cx, cy);
    const double r = grid.r_of(cx, cy, grid.theta_center_deg(theta));
    const std::uint32_t cell = cell_of[grid.pixel_index(x, y) * grid.theta_bins() + theta];
    REQUIRE(cell != 0xffffffffu);
    const std::uint32_t r_bin = cell % grid.r_bins();
    CHECK(grid.r_bin_low(r_bin) <= r);
    CHECK(r < grid.r_bin_high(r_bin));
  }
}

TEST_CASE("vision network has the five pipeline layers") {
  VisionNetConfig config;
  VisionNetwork vision = build_vision_network(config);
  CHECK(vision.network.population(vision.cartesian).size == 2700);
  CHECK(vision.network.population(vision.hough).size == 3690);
  CHECK(vision.network.population(vision.angle).size == 90);
  CHECK(vision.network.population(vision.cleanup).size == 90);
  CHECK(vision.network.population(vision.memory).size == 90);

  CHECK(vision.network.population(vision.hough).threshold == doctest::Approx(20.0));
  CHECK(vision.network.population(vision.hough).decay_tau == doctest::Approx(3.0));
  CHECK(vision.network.population(vision.cleanup).winner_take_all);
  CHECK(vision.network.population(vision.memory).self_excitation > 0);
}

TEST_CASE("spiking estimator detects a line volley and remembers it") {
  SnnLineEstimator estimator;
  const auto volley = line_volley(estimator.grid(), 30.0, 30, 20);
  REQUIRE(volley.size() >= 20);

  estimator.push_events(volley);
  estimator.advance_to(400);
  REQUIRE(estimator.estimate().valid);
  CHECK(std::abs(estimator.estimate().theta_deg - 30.0) <= 2.0);

  // No further input: the latch holds the angle for at least 2,000 steps.
  estimator.advance_to(400 + 2000 * 50);
  CHECK(estimator.estimate().valid);
  CHECK(std::abs(estimator.estimate().theta_deg - 30.0) <= 2.0);
}

TEST_CASE("a sustained new line overwrites the latched angle within 10 steps") {
  SnnLineEstimator estimator;
  estimator.push_events(line_volley(estimator.grid(), 30.0, 30, 20));
  estimator.advance_to(500);
  REQUIRE(std::abs(estimator.estimate().theta_deg - 30.0) <= 2.0);

  const std::int64_t start = 500;
  for (int step = 0; step < 10; ++step) {
    estimator.push_events(line_volley(estimator.grid(), -40.0, 30, start + step * 50 + 10));
  }
  estimator.advance_to(start + 10 * 50);
  CHECK(estimator.estimate().valid);
  CHECK(std::abs(estimator.estimate().theta_deg + 40.0) <= 2.0);
}

TEST_CASE("dense estimator picks the strongest line and enforces the vote floor") {
  CpuLineEstimator estimator;
  const HoughGrid& grid = estimator.grid();

  SUBCASE("50 events on one line") {
    auto events = line_volley(grid, 0.0, 50, 100);
    REQUIRE(events.size() == 50);
    estimator.push_events(events);
    estimator.advance_to(1000);
    CHECK(estimator.last_evaluation_valid());
    CHECK(std::abs(estimator.estimate().theta_deg) <= 2.0);
  }

  SUBCASE("two lines: more votes win") {
    auto strong = line_volley(grid, 30.0, 25, 100);
    auto weak = line_volley(grid, -40.0, 21, 120);
    REQUIRE(strong.size() == 25);
    REQUIRE(weak.size() == 21);
    estimator.push_events(strong);
    estimator.push_events(weak);
    estimator.advance_to(1000);
    CHECK(std::abs(estimator.estimate().theta_deg - 30.0) <= 2.0);
  }

  SUBCASE("too few votes stays invalid") {
    estimator.push_events(line_volley(grid, 10.0, 10, 100));
    estimator.advance_to(1000);
    CHECK(!estimator.last_evaluation_valid());
    CHECK(!estimator.estimate().valid);
  }
}

TEST_CASE("dense estimator window drops events older than 3 ms") {
  CpuLineEstimator estimator;
  estimator.push_events(line_volley(estimator.grid(), 20.0, 40, 100));
  estimator.advance_to(1000);
  CHECK(estimator.last_evaluation_valid());

  // 4 ms later the volley has left the window; the estimate is held.
  estimator.advance_to(5000);
  CHECK(!estimator.last_evaluation_valid());
  CHECK(estimator.estimate().valid);
  CHECK(std::abs(estimator.estimate().theta_deg - 20.0) <= 2.0);
}

TEST_CASE("sliding average emits once per stride") {
  SlidingAverage avg(200, 20);

  SUBCASE("constant input passes through") {
    std::optional<double> out;
    for (int k = 0; k < 200; ++k) {
      auto emitted = avg.push(3.25);
      if (emitted) out = emitted;
    }
    REQUIRE(out.has_value());
    CHECK(*out == doctest::Approx(3.25));
  }

  SUBCASE("step reaches 99.5% of the final level within 10 emissions") {
    for (int k = 0; k < 200; ++k) avg.push(0.0);
    std::vector<double> emissions;
    for (int k = 0; k < 200; ++k) {
      if (auto out = avg.push(1.0)) emissions.push_back(*out);
    }
    REQUIRE(emissions.size() == 10);
    CHECK(emissions.back() >= 0.995);
  }

  SUBCASE("alternating signs cancel") {
    std::optional<double> out;
    for (int k = 0; k < 400; ++k) {
      if (auto e = avg.push(k % 2 == 0 ? 1.0 : -1.0)) out = e;
    }
    REQUIRE(out.has_value());
    CHECK(std::abs(*out) <= 1e-12);
  }

  SUBCASE("zero window or stride is rejected") {
    CHECK_THROWS_AS(SlidingAverage(0, 20), ConfigError);
    CHECK_THROWS_AS(SlidingAverage(200, 0), ConfigError);
  }
}
