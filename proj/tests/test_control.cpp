#include <cmath>
#include <vector>

#include "doctest.h"
#include "neuroloop/control/decode.hpp"
#include "neuroloop/control/snn_pd.hpp"

using namespace neuroloop;

TEST_CASE("output decode endpoints and lattice") {
  OutputDecode d;
  CHECK(d.decode(0) == -1850.0);
  CHECK(d.decode(180) == doctest::Approx(-5.124653739612086).epsilon(1e-12));
  CHECK(d.decode(360) == doctest::Approx(1839.7506925207758).epsilon(1e-12));
  CHECK(d.step() == doctest::Approx(10.249307479224377).epsilon(1e-12));

  for (std::uint32_t i = 1; i < d.bins; ++i) {
    CHECK(d.decode(i) > d.decode(i - 1));
  }
  for (std::uint32_t i = 0; i < d.bins; i += 7) {
    CHECK(d.encode(d.decode(i)) == i);
  }
  CHECK(d.encode(-5000.0) == 0);
  CHECK(d.encode(5000.0) == 360);
}

TEST_CASE("thrust mixer splits around the hover point") {
  ThrustMap map;
  const MotorPair at_zero = map.thrust(0.0);
  CHECK(at_zero.plus == doctest::Approx(3050.0));
  CHECK(at_zero.minus == doctest::Approx(2710.0));

  const MotorPair at_200 = map.thrust(200.0);
  CHECK(at_200.plus == doctest::Approx(3150.0));
  CHECK(at_200.minus == doctest::Approx(2610.0));

  for (double u = -kCommandLimit; u <= kCommandLimit; u += 370.0) {
    const MotorPair p = map.thrust(u);
    CHECK(p.plus > 0.0);
    CHECK(p.minus > 0.0);
  }
}

TEST_CASE("pd command is linear and clamped") {
  PdGains gains{12.0, 10.0};
  CHECK(pd_command(gains, 1.0, 0.0) == doctest::Approx(12.0));
  CHECK(pd_command(gains, 0.0, 1.0) == doctest::Approx(10.0));
  CHECK(pd_command(gains, -2.0, 3.0) == doctest::Approx(6.0));
  CHECK(pd_command(gains, 1000.0, 0.0) == doctest::Approx(kCommandLimit));
  CHECK(pd_command(gains, -1000.0, 0.0) == doctest::Approx(-kCommandLimit));

  CHECK(pd_command(PdGains{3000.0, 900.0}, 1.0, 0.0) == doctest::Approx(3000.0));
}

TEST_CASE("rate estimator differentiates over its lag") {
  RateEstimator est(5, 1e-3);
  CHECK(est.push(0.0) == 0.0);
  double rate = 0.0;
  for (int k = 1; k < 10; ++k) rate = est.push(0.5 * k);
  CHECK(rate == doctest::Approx(500.0));

  SUBCASE("wrap-aware differences cross the seam") {
    RateEstimator wrapped(5, 1e-3, 180.0);
    double r = 0.0;
    for (double s : {81.0, 83.0, 85.0, 87.0, 89.0, -89.0, -87.0, -85.0, -83.0, -81.0}) {
      r = wrapped.push(s);
    }
    CHECK(r == doctest::Approx(2000.0));
  }
}

TEST_CASE("spiking pd input encoders cover their ranges") {
  SnnPdController controller;
  CHECK(controller.encode_error(0.0) == 180);
  CHECK(controller.encode_error(0.5) == 181);
  CHECK(controller.encode_error(-90.0) == 0);
  CHECK(controller.encode_error(90.0) == 360);
  CHECK(controller.encode_error(-1000.0) == 0);
  CHECK(controller.encode_error(1000.0) == 360);

  CHECK(controller.encode_rate(0.0) == 180);
  CHECK(controller.encode_rate(8.4) == 181);
  CHECK(controller.encode_rate(-1500.0) == 0);
  CHECK(controller.encode_rate(1500.0) == 360);
  CHECK(controller.output_index_for(180, 180) == 180);
}

TEST_CASE("spiking pd matches the algebraic law within one lattice step") {
  SnnPdController controller;
  const SnnPdConfig& cfg = controller.config();
  const PdGains gains{cfg.kp, cfg.kd};
  // One lattice step plus the offset of the zero-command index.
  const double bound = controller.output_decode().step() + 5.1247;

  for (double e : {-30.0, -15.0, -5.0, 0.0, 5.0, 15.0, 30.0}) {
    for (double r : {-50.0, -20.0, 0.0, 20.0, 50.0}) {
      const double u = controller.tick(e, r);
      const double expected = pd_command(gains, e, r);
      CAPTURE(e);
      CAPTURE(r);
      CHECK(std::abs(u - expected) <= bound);
      CHECK(controller.last_output_index() ==
            controller.output_index_for(controller.encode_error(e), controller.encode_rate(r)));
    }
  }
  CHECK(controller.feed_forward() == 0.0);
}
