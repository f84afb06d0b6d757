#include <vector>

#include "doctest.h"
#include "neuroloop/control/adaptation.hpp"
#include "neuroloop/control/snn_pd.hpp"
#include "neuroloop/engine/errors.hpp"

using namespace neuroloop;

TEST_CASE("trigger predicate gates on windowed mean squared error") {
  std::vector<double> window(500, 5.0);
  CHECK(adaptation_trigger_check(window));
  std::fill(window.begin(), window.end(), 4.0);
  CHECK_FALSE(adaptation_trigger_check(window));
  CHECK(adaptation_trigger_check(window, 16.0));
}

TEST_CASE("accumulator constants derive from the window") {
  AdaptationConfig cfg;
  CHECK(cfg.trigger_threshold() == doctest::Approx(12642.0));
  CHECK(cfg.trigger_decay_tau(50) == doctest::Approx(10000.0));
  // Full bank swing covers +-600 command units around zero trim.
  CHECK(cfg.ff_gain * cfg.bank_bias == doctest::Approx(600.0));
}

TEST_CASE("attach_adaptation validates its wiring") {
  const auto make_error_pop = [](SnnNetwork& net, std::uint32_t bins) {
    PopulationConfig pop;
    pop.name = "err";
    pop.size = bins;
    pop.threshold = 1.0;
    return net.add_population(pop);
  };

  SnnNetwork even;
  const std::uint32_t even_id = make_error_pop(even, 4);
  CHECK_THROWS_AS(attach_adaptation(even, even_id, 4, 0.5), ConfigError);

  SnnNetwork biased;
  const std::uint32_t biased_id = make_error_pop(biased, 5);
  AdaptationConfig bad;
  bad.bank_bias = 65;
  CHECK_THROWS_AS(attach_adaptation(biased, biased_id, 5, 0.5, bad), ConfigError);

  SnnNetwork good;
  const std::uint32_t good_id = make_error_pop(good, 5);
  const AdaptationIds ids = attach_adaptation(good, good_id, 5, 0.5);
  CHECK(good.population(ids.bank).size == 64);
  CHECK(good.population(ids.rplus).size == 1);
  CHECK(good.synapse_set(ids.wplus_set).plastic());
  CHECK(good.synapse_set(ids.wminus_set).plastic());
}

TEST_CASE("feed-forward trim engages only past the error boundary") {
  SnnPdConfig cfg;
  cfg.adaptation = true;
  SnnPdController controller(cfg);

  SUBCASE("persistent -6 deg error pulls the trim negative") {
    for (int t = 0; t < 500; ++t) controller.tick(-6.0, 0.0);
    CHECK(controller.feed_forward() <= -18.75);
    for (int t = 0; t < 500; ++t) controller.tick(-6.0, 0.0);
    CHECK(controller.feed_forward() <= -37.5);
  }

  SUBCASE("persistent +4 deg error stays below the boundary") {
    for (int t = 0; t < 500; ++t) controller.tick(4.0, 0.0);
    CHECK(controller.feed_forward() == 0.0);
  }

  SUBCASE("persistent +6 deg error pushes the trim positive") {
    for (int t = 0; t < 500; ++t) controller.tick(6.0, 0.0);
    CHECK(controller.feed_forward() >= 18.75);
  }
}
