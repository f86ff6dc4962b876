// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <set>
#include <sstream>

#include "geoncog/scenario.hpp"

namespace geoncog::scenario {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ScenarioError(ErrorKind::ParseError, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw ScenarioError(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

[[noreturn]] void invalid(const std::string &msg)
{
  throw ScenarioError(ErrorKind::ConfigInvalid, msg);
}

template <typename T>
T number(const json &doc, const char *key, T fallback)
{
  if (!doc.contains(key))
    return fallback;
  const auto &v = doc.at(key);
  if (!v.is_number())
    invalid(std::string(key) + " must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer())
      invalid(std::string(key) + " must be an integer");
    if constexpr (std::is_unsigned_v<T>)
      if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
        invalid(std::string(key) + " must be non-negative");
  }
  return v.get<T>();
}

} // namespace

ScenarioConfig config_from_json(const json &doc, const fs::path &base_dir)
{
  static const std::set<std::string> kKeys = {"version", "seed", "scene", "objects", "mix", "fov_degrees",
      "horizon_m", "capacity_k", "horizon_steps", "payoff_mode", "max_steps", "salience", "catalog", "start"};
  if (!doc.is_object())
    invalid("config must be a JSON object");
  for (const auto &[key, value] : doc.items())
    if (!kKeys.contains(key))
      invalid("unknown config key '" + key + "'");
  if (!doc.contains("version") || !doc.at("version").is_number_integer() || doc.at("version").get<int>() != 1)
    invalid("config version must be 1");

  ScenarioConfig c;
  try {
    c.seed = number<std::uint64_t>(doc, "seed", 0);
    auto &e = c.explorer;
    e.sensor.fov_degrees = number<double>(doc, "fov_degrees", e.sensor.fov_degrees);
    e.sensor.horizon_m = number<double>(doc, "horizon_m", e.sensor.horizon_m);
    e.capacity_k = number<int>(doc, "capacity_k", e.capacity_k);
    e.horizon_steps = number<int>(doc, "horizon_steps", e.horizon_steps);
    e.max_steps = number<std::size_t>(doc, "max_steps", e.max_steps);
    if (doc.contains("payoff_mode"))
      e.payoff_mode = explorer::payoff_mode_from_string(doc.at("payoff_mode").get<std::string>());
    if (doc.contains("salience"))
      for (const auto &[id, v] : doc.at("salience").items()) {
        if (!v.is_number())
          invalid("salience values must be numbers");
        e.salience[static_cast<geons::ObjectId>(std::stoul(id))] = v.get<double>();
      }
    if (doc.contains("catalog"))
      e.catalog = geons::catalog_from_json(read_json(base_dir / doc.at("catalog").get<std::string>()));
    if (doc.contains("start")) {
      const auto &s = doc.at("start");
      e.start = explorer::AgentPose{s.at("x").get<int>(), s.at("y").get<int>(), s.value("heading", 0)};
    }
    explorer::validate(e);

    if (doc.contains("scene")) {
      if (doc.contains("objects") || doc.contains("mix"))
        invalid("objects and mix apply only to generated scenes");
      const auto &s = doc.at("scene");
      c.scene = s.is_string() ? worldgen::load_scene(base_dir / s.get<std::string>()) : worldgen::scene_from_json(s);
    } else {
      auto objects = number<std::size_t>(doc, "objects", 3);
      auto mix = doc.contains("mix") ? worldgen::parse_mix(doc.at("mix").get<std::string>()) : worldgen::ClassMix{};
      c.scene = worldgen::generate_scene(c.seed, objects, mix);
    }
    if (e.start && !perception::inside(c.scene, *e.start))
      invalid("start pose lies outside the scene bounds");
  } catch (const json::exception &ex) {
    invalid(std::string("config: ") + ex.what());
  } catch (const std::invalid_argument &) {
    invalid("salience keys must be object ids");
  } catch (const explorer::ExplorerError &ex) {
    invalid(ex.what());
  } catch (const geons::GeonError &ex) {
    invalid(std::string("catalog: ") + ex.what());
  }
  return c;
}

ScenarioConfig load_config(const fs::path &path)
{
  return config_from_json(read_json(path), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

} // namespace geoncog::scenario
