// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

// Hand-built scenes for unit tests.

#pragma once

#include "geoncog/worldgen.hpp"

namespace testing {

// Single-geon primitive object resting on the ground at (x, y).
inline void add_block(geoncog::worldgen::Scene &scene, geoncog::geons::ObjectId id, double x, double y,
    Eigen::Vector3d scale = Eigen::Vector3d::Ones(), geoncog::geons::ClassId cls = 1, double salience = 0.0)
{
  geoncog::worldgen::ObjectSpec o;
  o.id = id;
  o.object_class = geoncog::worldgen::ObjectClass::Primitive;
  o.position = {x, y, 0};
  o.salience = salience;
  o.params = {{"class", cls}, {"sx", scale.x()}, {"sy", scale.y()}, {"sz", scale.z()}};
  geoncog::geons::GeonInstance g;
  g.instance_id = id;
  g.class_id = cls;
  g.position = {x, y, 0.5 * scale.z()};
  g.scale = scale;
  g.parent_object = id;
  o.geons.push_back(g);
  scene.objects.push_back(o);
}

} // namespace testing
