// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "geoncog/perception.hpp"
#include "builders.hpp"
#include "properties.hpp"

using namespace geoncog::perception;
using geoncog::geons::ClassId;
using geoncog::geons::Facet;
using geoncog::geons::zone;
using geoncog::worldgen::Scene;
using Eigen::Vector3d;
using testing::add_block;

namespace {

const auto kCatalog = geoncog::geons::default_catalog();

} // namespace

TEST_CASE("bands")
{
  CHECK(band_for(1.0, 15) == Band::Near);
  CHECK(band_for(5.0, 15) == Band::Near);
  CHECK(band_for(5.1, 15) == Band::Mid);
  CHECK(band_for(10.0, 15) == Band::Mid);
  CHECK(band_for(10.1, 15) == Band::Far);
}

TEST_CASE("candidate sets")
{
  using geoncog::geons::Base;
  using geoncog::geons::Deformation;
  using geoncog::geons::Line;
  auto brick = geoncog::geons::default_class_id(Base::Brick, Line::Long, Deformation::None, false);
  CHECK(candidate_set(brick, Band::Near, kCatalog) == std::vector<ClassId>{brick});
  auto far = candidate_set(brick, Band::Far, kCatalog);
  CHECK(far.size() == 8);
  for (auto c : far)
    CHECK(geoncog::geons::find_class(kCatalog, c).base == Base::Brick);
  auto mid = candidate_set(brick, Band::Mid, kCatalog);
  CHECK(mid.size() == 4);
  for (auto c : mid)
    CHECK(geoncog::geons::find_class(kCatalog, c).axis_line() == Line::Long);
  try {
    candidate_set(99, Band::Far, kCatalog);
    FAIL("expected UnknownClass");
  } catch (const PerceptionError &e) {
    CHECK(e.kind() == ErrorKind::UnknownClass);
  }
}

TEST_CASE("sense geometry")
{
  Scene empty;
  CHECK(sense(empty, {0, 0, 0}, {90, 12}, kCatalog).empty());

  Scene scene;
  add_block(scene, 1, 3, 0, {1, 1, 1}, 5);
  auto ahead = sense(scene, {0, 0, 0}, {90, 12}, kCatalog);
  REQUIRE(ahead.size() == 1);
  CHECK(ahead[0].geon == 1);
  CHECK(ahead[0].object == 1);
  CHECK(ahead[0].distance == doctest::Approx(3.0));
  CHECK(ahead[0].band == Band::Near);
  CHECK(ahead[0].candidates == std::vector<ClassId>{5});
  CHECK(ahead[0].visible_facets == (zone(Facet::Top) | zone(Facet::Left)));

  CHECK(sense(scene, {0, 0, 4}, {90, 12}, kCatalog).empty()); // facing -x
  CHECK(sense(scene, {0, 0, 4}, {360, 12}, kCatalog).size() == 1);
  CHECK(sense(scene, {0, 0, 0}, {90, 2.5}, kCatalog).empty());
  CHECK(sense(scene, {0, 0, 1}, {90, 12}, kCatalog).size() == 1); // 45° left, on the edge

  try {
    sense(scene, {50, 0, 0}, {90, 12}, kCatalog);
    FAIL("expected PoseOutOfBounds");
  } catch (const PerceptionError &e) {
    CHECK(e.kind() == ErrorKind::PoseOutOfBounds);
  }
  CHECK_THROWS_AS(sense(scene, {0, 0, 0}, {0, 12}, kCatalog), PerceptionError);
}

TEST_CASE("occlusion")
{
  Scene lone;
  add_block(lone, 1, 6, 0, {0.5, 0.5, 0.5});
  CHECK(sense(lone, {0, 0, 0}, {90, 15}, kCatalog).size() == 1);

  Scene hidden = lone;
  add_block(hidden, 2, 3, 0, {0.5, 2, 2});
  auto seen = sense(hidden, {0, 0, 0}, {90, 15}, kCatalog);
  REQUIRE(seen.size() == 1);
  CHECK(seen[0].object == 2);
  auto iv = occlusion_intervals(hidden, {0, 0, 0});
  CHECK(iv.at(2).lo < iv.at(1).lo);
  CHECK(iv.at(2).hi > iv.at(1).hi);

  // Only partly behind the wall.
  Scene partial;
  add_block(partial, 1, 8, 2.9, {0.5, 0.5, 0.5});
  add_block(partial, 2, 3, 0, {0.5, 2, 2});
  CHECK(sense(partial, {0, 0, 0}, {90, 15}, kCatalog).size() == 2);
}

TEST_CASE("sense is sorted and pure")
{
  auto scene = geoncog::worldgen::generate_scene(3, 4, {});
  AgentPose pose{-8, -8, 1};
  auto a = sense(scene, pose, {120, 20}, kCatalog);
  CHECK(a == sense(scene, pose, {120, 20}, kCatalog));
  for (std::size_t i = 1; i < a.size(); ++i)
    CHECK(a[i - 1].distance <= a[i].distance);
}

TEST_CASE("perception properties")
{
  auto out = props::perception_suite(51, 200);
  INFO(out.detail);
  CHECK(out.pass);
}
