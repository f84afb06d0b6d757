#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "neuroloop/errors.hpp"
#include "neuroloop/harness/config.hpp"

using namespace neuroloop;

TEST_CASE("defaults expose typed values") {
  const Config cfg = default_config();
  CHECK(cfg.get_int("engine.timestep_us") == 50);
  CHECK(cfg.get_double("gains.vision_snn.kp") == doctest::Approx(34.9));
  CHECK(cfg.get_int("grid.theta_bins") == 90);
  CHECK(cfg.has("plant.inertia"));
  CHECK_FALSE(cfg.has("no.such.key"));
  CHECK_THROWS_AS(cfg.get_double("no.such.key"), ConfigError);
}

TEST_CASE("merge_line parses, trims and strips comments") {
  Config cfg = default_config();
  cfg.merge_line("  gains.vision_snn.kp =  40.5   # stiffer loop");
  CHECK(cfg.get_double("gains.vision_snn.kp") == doctest::Approx(40.5));
  cfg.merge_line("# a full comment line");
  cfg.merge_line("   ");
  CHECK_THROWS_AS(cfg.merge_line("gains.vision_snn.kp 40.5"), ParseError);
  CHECK_THROWS_AS(cfg.merge_line(" = 3"), ParseError);
  CHECK_THROWS_AS(cfg.merge_line("gains.tail.kp = 1"), ConfigError);
}

TEST_CASE("typed getters reject malformed values") {
  Config cfg;
  cfg.set("x", "1.5oops");
  CHECK_THROWS_AS(cfg.get_double("x"), ConfigError);
  cfg.set("x", "3.25");
  CHECK(cfg.get_double("x") == doctest::Approx(3.25));
  cfg.set("n", "12");
  CHECK(cfg.get_int("n") == 12);
  cfg.set("n", "12.5");
  CHECK_THROWS_AS(cfg.get_int("n"), ConfigError);
}

TEST_CASE("booleans accept the usual spellings") {
  Config cfg;
  int idx = 0;
  for (const char* text : {"1", "true", "on", "yes"}) {
    cfg.set("b" + std::to_string(idx), text);
    CHECK(cfg.get_bool("b" + std::to_string(idx)));
    ++idx;
  }
  for (const char* text : {"0", "false", "off", "no"}) {
    cfg.set("b" + std::to_string(idx), text);
    CHECK_FALSE(cfg.get_bool("b" + std::to_string(idx)));
    ++idx;
  }
  cfg.set("bad", "enabled");
  CHECK_THROWS_AS(cfg.get_bool("bad"), ConfigError);
}

TEST_CASE("lists split on commas") {
  Config cfg;
  cfg.set("targets", "1.5, 2, -3");
  const auto list = cfg.get_list("targets");
  REQUIRE(list.size() == 3);
  CHECK(list[0] == doctest::Approx(1.5));
  CHECK(list[1] == doctest::Approx(2.0));
  CHECK(list[2] == doctest::Approx(-3.0));
  cfg.set("targets", "4,,5,");
  CHECK(cfg.get_list("targets").size() == 2);
}

TEST_CASE("hash identifies the effective configuration") {
  const Config a = default_config();
  Config b = default_config();
  CHECK(a.hash() == b.hash());
  b.merge_line("plant.inertia = 0.009");
  CHECK(a.hash() != b.hash());
}

TEST_CASE("merge_file layers a run config over the defaults") {
  const std::string path = "test_config_tmp.cfg";
  {
    std::ofstream out(path);
    out << "# run overrides\n";
    out << "scenario.duration_s = 2\n";
    out << "plant.process_noise_nm = 0\n";
  }
  Config cfg = default_config();
  cfg.merge_file(path);
  CHECK(cfg.get_double("scenario.duration_s") == doctest::Approx(2.0));
  CHECK(cfg.get_double("plant.process_noise_nm") == 0.0);
  std::remove(path.c_str());

  CHECK_THROWS_AS(cfg.merge_file("does_not_exist.cfg"), ConfigError);
}

TEST_CASE("write emits a canonical round-trippable dump") {
  Config cfg = default_config();
  cfg.merge_line("scenario.duration_s = 3");
  std::ostringstream dump;
  cfg.write(dump);

  Config reread = default_config();
  std::istringstream in(dump.str());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) reread.merge_line(line, ++line_no);
  CHECK(reread.hash() == cfg.hash());
  CHECK(reread.get_double("scenario.duration_s") == doctest::Approx(3.0));
}
