// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "geoncog/scenario.hpp"

using namespace geoncog::scenario;
using nlohmann::json;

namespace {

const std::filesystem::path kFixtures = GEONCOG_FIXTURE_DIR;

ErrorKind kind_of(const json &doc)
{
  try {
    config_from_json(doc, kFixtures);
  } catch (const ScenarioError &e) {
    return e.kind();
  }
  FAIL("no ScenarioError thrown");
  return ErrorKind::ParseError;
}

} // namespace

TEST_CASE("config defaults")
{
  auto c = config_from_json(json{{"version", 1}, {"seed", 4}});
  CHECK(c.seed == 4);
  CHECK(c.scene.objects.size() == 3);
  CHECK(c.explorer.sensor.fov_degrees == 90);
  CHECK(c.explorer.sensor.horizon_m == 15);
  CHECK(c.explorer.capacity_k == 2);
  CHECK(c.explorer.horizon_steps == 2);
  CHECK(c.explorer.payoff_mode == geoncog::explorer::PayoffMode::ParJoin);
  CHECK(c.explorer.max_steps == 2000);
  CHECK(c.explorer.catalog.size() == 16);
  CHECK_FALSE(c.explorer.start);
}

TEST_CASE("config files")
{
  auto c = load_config(kFixtures / "generated.json");
  CHECK(c.scene.objects.size() == 2);
  CHECK(c.explorer.salience.at(2) == 0.5);
  for (const auto &o : c.scene.objects)
    CHECK((o.object_class == geoncog::worldgen::ObjectClass::Tree
        || o.object_class == geoncog::worldgen::ObjectClass::Stairs));
  auto b = load_config(kFixtures / "boundary.json");
  REQUIRE(b.explorer.start);
  CHECK(b.explorer.start->x == -4);
  auto three = load_config(kFixtures / "three_objects.json");
  CHECK(three.explorer.payoff_mode == geoncog::explorer::PayoffMode::ImplicationMeet);
  CHECK(three.explorer.horizon_steps == 3);
}

TEST_CASE("config errors")
{
  CHECK(kind_of(json{{"seed", 1}}) == ErrorKind::ConfigInvalid);
  CHECK(kind_of(json{{"version", 2}}) == ErrorKind::ConfigInvalid);
  CHECK(kind_of(json{{"version", 1}, {"speed", 1}}) == ErrorKind::ConfigInvalid);
  CHECK(kind_of(json{{"version", 1}, {"capacity_k", 0}}) == ErrorKind::ConfigInvalid);
  CHECK(kind_of(json{{"version", 1}, {"horizon_m", "far"}}) == ErrorKind::ConfigInvalid);
  CHECK(kind_of(json{{"version", 1}, {"max_steps", -1}}) == ErrorKind::ConfigInvalid);
  CHECK(kind_of(json{{"version", 1}, {"payoff_mode", "max"}}) == ErrorKind::ConfigInvalid);
  CHECK(kind_of(json{{"version", 1}, {"salience", {{"x", 1}}}}) == ErrorKind::ConfigInvalid);
  CHECK(kind_of(json{{"version", 1}, {"start", {{"x", 99}, {"y", 0}}}}) == ErrorKind::ConfigInvalid);
  CHECK(kind_of(json{{"version", 1}, {"scene", "scenes/objects_1.json"}, {"objects", 2}}) == ErrorKind::ConfigInvalid);
  CHECK(kind_of(json::array()) == ErrorKind::ConfigInvalid);
  CHECK(kind_of(json{{"version", 1}, {"catalog", "missing.json"}}) == ErrorKind::ParseError);
  try {
    load_config(kFixtures / "nope.json");
    FAIL("expected ParseError");
  } catch (const ScenarioError &e) {
    CHECK(e.kind() == ErrorKind::ParseError);
  }
}

TEST_CASE("inline scene")
{
  auto scene = geoncog::worldgen::load_scene(kFixtures / "minimal_scene.json");
  auto c = config_from_json(json{{"version", 1}, {"scene", geoncog::worldgen::scene_to_json(scene, false)}});
  CHECK(c.scene == scene);
}

TEST_CASE("replay")
{
  auto c = load_config(kFixtures / "one_object.json");
  c.explorer.max_steps = 30;
  auto trace = trace_text(geoncog::explorer::run_episode(c.scene, c.explorer).trace);
  auto ok = replay(c, trace);
  CHECK(ok.match);

  auto lines = trace;
  auto third = lines.find('\n', lines.find('\n') + 1) + 1;
  lines.insert(third + 1, " ");
  auto bad = replay(c, lines);
  CHECK_FALSE(bad.match);
  CHECK(bad.first_difference == 3);

  auto cut = replay(c, trace.substr(0, third));
  CHECK_FALSE(cut.match);
  CHECK(cut.first_difference == 3);
  CHECK(replay(c, "").first_difference == 1);
}
