// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <filesystem>

#include "geoncog/worldgen.hpp"
#include "properties.hpp"

using namespace geoncog::worldgen;
using Eigen::Vector3d;

#ifndef GEONCOG_FIXTURE_DIR
#error "GEONCOG_FIXTURE_DIR must name the test fixture directory"
#endif

namespace {

const std::filesystem::path kFixtures = GEONCOG_FIXTURE_DIR;

ErrorKind kind_of(auto &&fn)
{
  try {
    fn();
  } catch (const WorldError &e) {
    return e.kind();
  }
  FAIL("no WorldError thrown");
  return ErrorKind::ParseError;
}

} // namespace

TEST_CASE("depenetration step")
{
  geoncog::Rng rng(1);
  std::vector<Vector3d> two{{0, 0, 0}, {10, 0, 0}};
  auto moved = depenetrate_step(two, 0.25, 0.5, rng);
  CHECK(moved[0].x() == doctest::Approx(-0.0025));
  CHECK(moved[1].x() == doctest::Approx(10.0025));
  CHECK(moved[0].y() == 0.0);

  // Clamped at d_max when close.
  std::vector<Vector3d> close{{0, 0, 0}, {0.1, 0, 0}};
  moved = depenetrate_step(close, 4.0, 0.5, rng);
  CHECK((moved[0] - close[0]).norm() == doctest::Approx(0.5));

  std::vector<Vector3d> one{{1, 2, 0}};
  CHECK(depenetrate_step(one, 4.0, 0.5, rng) == one);

  // Coincident points split horizontally, d_max each, opposite ways.
  std::vector<Vector3d> same{{1, 1, 0}, {1, 1, 0}};
  moved = depenetrate_step(same, 4.0, 0.5, rng);
  CHECK((moved[0] - same[0]).norm() == doctest::Approx(0.5));
  CHECK((moved[0] - same[0] + (moved[1] - same[1])).norm() == doctest::Approx(0.0));
  CHECK(moved[0].z() == 0.0);
}

TEST_CASE("depenetration loop")
{
  DepenetrationParams p;
  std::vector<Vector3d> one{{3, 3, 0}};
  CHECK(depenetrate(one, p, 1) == one);

  std::vector<Vector3d> crowd{{0, 0, 0}, {0.05, 0, 0}, {0, 0.05, 0}, {0, 0, 0}};
  auto out = depenetrate(crowd, p, 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      CHECK(std::max(std::abs(out[i].x() - out[j].x()), std::abs(out[i].y() - out[j].y())) >= p.clearance);

  p.max_iters = 0;
  CHECK(kind_of([&] { depenetrate(crowd, p, 2); }) == ErrorKind::PlacementFailure);
}

TEST_CASE("trees")
{
  CHECK(gen_tree(1.5, 0.25, 3, 0, 1).size() == 1);
  CHECK(gen_tree(1.5, 0.25, 3, 1, 1).size() == 4);
  CHECK(gen_tree(1.5, 0.25, 2, 2, 1).size() == 7);
  CHECK(gen_tree(1.5, 0.25, 2, 2, 1) == gen_tree(1.5, 0.25, 2, 2, 1));
  auto t = gen_tree(1.5, 0.25, 2, 1, 3);
  CHECK(t[0].class_id == geoncog::geons::kTrunkClass);
  CHECK(t[1].class_id == geoncog::geons::kWedgeClass);
  CHECK(kind_of([] { gen_tree(1.5, 0.25, 3, 5, 1); }) == ErrorKind::TooManyGeons);
  CHECK(kind_of([] { gen_tree(-1, 0.25, 1, 1, 1); }) == ErrorKind::InvalidParams);
}

TEST_CASE("walls and stairs")
{
  auto wall = gen_wall(1.5, 1.0, 0.5);
  REQUIRE(wall.size() == 1);
  CHECK(wall[0].scale.isApprox(Vector3d(1.5, 0.5, 1.0)));

  auto tiled = gen_wall(5.0, 3.0, 0.5);
  CHECK(tiled.size() == 3 * 2);
  for (const auto &g : tiled) {
    CHECK_NOTHROW(geoncog::geons::validate(g));
  }

  CHECK(gen_stairs(1, 0.5, 0.5, 1.0).size() == 1);
  auto stairs = gen_stairs(4, 0.5, 0.5, 1.0);
  CHECK(stairs.size() == 4);
  auto m = geoncog::geons::incidence_matrix(stairs);
  int pairs = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      CHECK(m.intersects(i, j) == m.intersects(j, i));
      pairs += m.intersects(i, j);
      if (j == i + 1)
        CHECK(m.intersects(i, j));
    }
  CHECK(pairs == 3);
  CHECK(kind_of([] { gen_stairs(0, 0.5, 0.5, 1.0); }) == ErrorKind::InvalidParams);
}

TEST_CASE("parameter validation")
{
  CHECK_NOTHROW(validate_params(ObjectClass::Wall, {{"length", 2}, {"height", 1}, {"thickness", 0.5}}));
  CHECK(kind_of([] { validate_params(ObjectClass::Wall, {{"length", 2}, {"height", 1}}); }) == ErrorKind::InvalidParams);
  CHECK(kind_of([] { validate_params(ObjectClass::Wall, {{"length", 99}, {"height", 1}, {"thickness", 0.5}}); })
      == ErrorKind::InvalidParams);
  CHECK(kind_of([] {
    validate_params(ObjectClass::Stairs, {{"n_steps", 2.5}, {"rise", 0.5}, {"run", 0.5}, {"width", 1}});
  }) == ErrorKind::InvalidParams);
  CHECK(kind_of([] {
    validate_params(ObjectClass::Primitive, {{"class", 1}, {"sx", 1}, {"sy", 1}, {"sz", 1}, {"extra", 1}});
  }) == ErrorKind::InvalidParams);
}

TEST_CASE("class mix parsing")
{
  auto m = parse_mix("tree=2,wall=1");
  CHECK(m.weights == std::array<double, 4>{2, 1, 0, 0});
  CHECK(kind_of([] { parse_mix("tree"); }) == ErrorKind::ParseError);
  CHECK_THROWS_AS(parse_mix("bush=1"), WorldError);
  CHECK(kind_of([] { generate_scene(1, 2, parse_mix("tree=0")); }) == ErrorKind::InvalidParams);
  CHECK(kind_of([] { generate_scene(1, 2, parse_mix("tree=-1,wall=2")); }) == ErrorKind::InvalidParams);
}

TEST_CASE("scene generation")
{
  auto a = generate_scene(42, 3, {});
  auto b = generate_scene(42, 3, {});
  CHECK(a == b);
  CHECK(scene_to_json(a, true).dump() == scene_to_json(b, true).dump());
  CHECK(a.objects.size() == 3);
  CHECK_FALSE(generate_scene(43, 3, {}) == a);

  std::uint32_t next = 1;
  for (const auto &o : a.objects)
    for (const auto &g : o.geons) {
      CHECK(g.instance_id == next++);
      CHECK(g.parent_object == o.id);
    }

  CHECK(kind_of([] { generate_scene(1, 0, {}); }) == ErrorKind::InvalidParams);
  ClassMix only_walls{{0, 1, 0, 0}};
  for (const auto &o : generate_scene(7, 4, only_walls).objects)
    CHECK(o.object_class == ObjectClass::Wall);
}

TEST_CASE("scene files")
{
  auto scene = generate_scene(9, 4, {});
  CHECK(scene_from_json(scene_to_json(scene, true)) == scene);
  CHECK(scene_from_json(scene_to_json(scene, false)) == scene);

  auto doc = scene_to_json(scene, false);
  doc["objects"][0]["position"] = {99.0, 0.0, 0.0};
  CHECK(kind_of([&] { scene_from_json(doc); }) == ErrorKind::InvariantViolation);
  CHECK(kind_of([] { scene_from_json(nlohmann::json::parse(R"({"objects": 1})")); }) == ErrorKind::ParseError);

  auto minimal = load_scene(kFixtures / "minimal_scene.json");
  REQUIRE(minimal.objects.size() == 1);
  CHECK(minimal.objects[0].object_class == ObjectClass::Stairs);
  CHECK(minimal.objects[0].geons.size() == 3);
  CHECK(load_scene(kFixtures / "minimal_scene.json") == minimal);

  auto path = std::filesystem::temp_directory_path() / "geoncog-unit-scene.json";
  save_scene(scene, path, true);
  CHECK(load_scene(path) == scene);
  std::filesystem::remove(path);
}

TEST_CASE("worldgen properties")
{
  auto out = props::worldgen_suite(41, 15);
  INFO(out.detail);
  CHECK(out.pass);
}
