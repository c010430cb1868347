#include <string>

#include "doctest.h"
#include "satdomain/config.hpp"

using namespace satdomain;

TEST_CASE("serialization round trip") {
  const ScenarioConfig d = desk_config();
  const std::string text = serialize_config(d);
  CHECK(parse_config(text) == d);
  CHECK(serialize_config(parse_config(text)) == text);

  ScenarioConfig c = d;
  c.traffic.gravity_g = 3.5e-7;
  c.horizon_s = 600.0;
  c.overhead.capacity_override.clear();
  c.overhead.cpt_complexity = Complexity::Cubic;
  c.fov.meo_model = MeoFovModel::MinElevation;
  c.gammas = {0.0, 0.1, 1.0};
  c.seeds = {7};
  CHECK(parse_config(serialize_config(c)) == c);
  CHECK(config_hash(c) != config_hash(d));
  CHECK(config_hash(d).size() == 16);
}

TEST_CASE("the shipped desk file matches the built-in scenario") {
  CHECK(load_config(SATDOMAIN_DESK_CONFIG) == desk_config());
}

TEST_CASE("defaults fill an empty document") {
  const ScenarioConfig c = parse_config("constellation: {leo: [iridium], meo: [meo-10354]}\n");
  CHECK(c.leo_shells.size() == 1);
  CHECK(c.step_s == 15.0);
  CHECK(c.lookahead_s == 30.0);
  CHECK(c.overhead.f_sync_hz == doctest::Approx(1.0 / 15.0));
  CHECK(c.kmeans_restarts == 8);
}

TEST_CASE("schema errors carry a line number") {
  const std::string text =
      "name: x\n"
      "constellation:\n"
      "  leo: [iridium]\n"
      "  colour: blue\n";
  try {
    parse_config(text, "t.yaml");
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("t.yaml:4") != std::string::npos);
    CHECK(msg.find("colour") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("constellation: {leo: [nosuch], meo: [meo-10354]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("constellation: {leo: [iridium], meo: [meo-10354]}\ntime: {step_s: fast}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("constellation: [\n"), ConfigError);
}

TEST_CASE("semantic ranges are enforced") {
  const std::string base = "constellation: {leo: [iridium], ground_stations: [{name: A, lat: 0, lon: 0}]}\n";
  CHECK_NOTHROW(parse_config(base));
  CHECK_THROWS_AS(parse_config(base + "experiment: {gammas: [2]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(base + "experiment: {gammas: [-0.1]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(base + "experiment: {strategies: [fastest]}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(base + "time: {step_s: 0}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(base + "overhead: {f_sync_hz: -1}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("name: empty\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}
