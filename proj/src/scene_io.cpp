// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <set>
#include <sstream>

#include "geoncog/worldgen.hpp"

namespace geoncog::worldgen {

using nlohmann::json;

namespace {

json vec(const Eigen::Vector3d &v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec(const json &j)
{
  if (!j.is_array() || j.size() != 3)
    throw WorldError(ErrorKind::ParseError, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json geon_to_json(const GeonInstance &g)
{
  return {{"id", g.instance_id}, {"class", g.class_id}, {"position", vec(g.position)}, {"scale", vec(g.scale)},
      {"noise", g.noise}, {"parent", g.parent_object}};
}

GeonInstance geon_from_json(const json &j)
{
  GeonInstance g;
  g.instance_id = j.at("id").get<geons::InstanceId>();
  g.class_id = j.at("class").get<geons::ClassId>();
  g.position = vec(j.at("position"));
  g.scale = vec(j.at("scale"));
  g.noise = j.value("noise", 0.0);
  g.parent_object = j.at("parent").get<ObjectId>();
  return g;
}

bool inside(const Eigen::AlignedBox3d &box, const Eigen::Vector3d &p)
{
  return (p.array() >= box.min().array()).all() && (p.array() <= box.max().array()).all();
}

void check_scene(const Scene &scene)
{
  auto fail = [](const std::string &msg) { throw WorldError(ErrorKind::InvariantViolation, msg); };
  if (scene.objects.empty())
    fail("scene has no objects");
  if ((scene.bounds.min().array() > scene.bounds.max().array()).any())
    fail("scene bounds are inverted");
  std::set<ObjectId> ids;
  std::set<geons::InstanceId> instances;
  for (const auto &o : scene.objects) {
    auto who = "object " + std::to_string(o.id);
    if (o.id == 0 || !ids.insert(o.id).second)
      fail(who + ": ids must be positive and unique");
    if (!inside(scene.bounds, o.position))
      fail(who + ": position outside the scene bounds");
    if (o.orientation < 0 || o.orientation > 270 || o.orientation % 90 != 0)
      fail(who + ": orientation must be 0, 90, 180 or 270");
    if (!(o.salience >= 0.0))
      fail(who + ": salience must be non-negative");
    try {
      validate_params(o.object_class, o.params);
      for (const auto &g : o.geons) {
        geons::validate(g);
        if (g.parent_object != o.id)
          fail(who + ": geon " + std::to_string(g.instance_id) + " has another parent");
        if (!instances.insert(g.instance_id).second)
          fail(who + ": duplicate geon id " + std::to_string(g.instance_id));
      }
    } catch (const WorldError &e) {
      if (e.kind() == ErrorKind::InvariantViolation)
        throw;
      fail(who + ": " + e.what());
    } catch (const geons::GeonError &e) {
      fail(who + ": " + e.what());
    }
  }
}

} // namespace

json scene_to_json(const Scene &scene, bool with_geons)
{
  json objects = json::array();
  for (const auto &o : scene.objects) {
    json entry = {{"id", o.id}, {"class", to_string(o.object_class)}, {"position", vec(o.position)},
        {"orientation", o.orientation}, {"params", o.params}, {"salience", o.salience}};
    if (with_geons) {
      json gs = json::array();
      for (const auto &g : o.geons)
        gs.push_back(geon_to_json(g));
      entry["geons"] = gs;
    }
    objects.push_back(entry);
  }
  return {{"version", 1}, {"seed", scene.seed},
      {"bounds", {{"min", vec(scene.bounds.min())}, {"max", vec(scene.bounds.max())}}}, {"objects", objects}};
}

Scene scene_from_json(const json &doc)
{
  Scene scene;
  bool embedded = true;
  try {
    if (doc.at("version").get<int>() != 1)
      throw WorldError(ErrorKind::ParseError, "unsupported scene version");
    scene.seed = doc.at("seed").get<std::uint64_t>();
    const auto &b = doc.at("bounds");
    scene.bounds = Eigen::AlignedBox3d(vec(b.at("min")), vec(b.at("max")));
    for (const auto &j : doc.at("objects")) {
      ObjectSpec o;
      o.id = j.at("id").get<ObjectId>();
      o.object_class = object_class_from_string(j.at("class").get<std::string>());
      o.position = vec(j.at("position"));
      o.orientation = j.value("orientation", 0);
      o.params = j.at("params").get<Params>();
      o.salience = j.value("salience", 0.0);
      if (j.contains("geons"))
        for (const auto &g : j.at("geons"))
          o.geons.push_back(geon_from_json(g));
      else
        embedded = false;
      scene.objects.push_back(std::move(o));
    }
  } catch (const json::exception &e) {
    throw WorldError(ErrorKind::ParseError, std::string("scene: ") + e.what());
  }
  if (!embedded) {
    for (auto &o : scene.objects)
      o.geons.clear();
    check_scene(scene);
    expand(scene);
  }
  check_scene(scene);
  return scene;
}

void save_scene(const Scene &scene, const std::filesystem::path &path, bool with_geons)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw WorldError(ErrorKind::ParseError, "cannot write " + path.string());
  out << scene_to_json(scene, with_geons).dump(2) << "\n";
}

Scene load_scene(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw WorldError(ErrorKind::ParseError, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return scene_from_json(json::parse(buf.str()));
  } catch (const json::parse_error &e) {
    throw WorldError(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

} // namespace geoncog::worldgen
