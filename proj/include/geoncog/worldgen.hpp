// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoncog/geons.hpp"
#include "geoncog/random.hpp"
#include "json.hpp"

namespace geoncog::worldgen {

enum class ErrorKind
{
  PlacementFailure,
  TooManyGeons,
  InvalidParams,
  ParseError,
  InvariantViolation,
};

const char *to_string(ErrorKind kind);

class WorldError : public std::runtime_error
{
 public:
  WorldError(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

using geons::GeonInstance;
using geons::ObjectId;

enum class ObjectClass : std::uint8_t
{
  Tree,
  Wall,
  Stairs,
  Primitive,
};

inline constexpr std::array<ObjectClass, 4> kObjectClasses = {
    ObjectClass::Tree, ObjectClass::Wall, ObjectClass::Stairs, ObjectClass::Primitive};

const char *to_string(ObjectClass c);
ObjectClass object_class_from_string(const std::string &s);

struct ParamRange
{
  const char *name;
  double lo;
  double hi;
  bool integer;
};

/// Declared parameter ranges. Scene files must give exactly these keys.
std::span<const ParamRange> param_ranges(ObjectClass c);

using Params = std::map<std::string, double>;

/// Throws InvalidParams on a missing, unknown, non-integral or out-of-range
/// parameter.
void validate_params(ObjectClass c, const Params &params);

struct ObjectSpec
{
  ObjectId id = 0;
  ObjectClass object_class = ObjectClass::Primitive;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  int orientation = 0; // degrees, a multiple of 90
  Params params;
  double salience = 0.0;
  std::vector<GeonInstance> geons; // world coordinates

  friend bool operator==(const ObjectSpec &, const ObjectSpec &) = default;
};

/// Union of the object's geon boxes; empty box for an object without geons.
Eigen::AlignedBox3d aggregate_box(const ObjectSpec &o);

struct Scene
{
  std::uint64_t seed = 0;
  Eigen::AlignedBox3d bounds{Eigen::Vector3d(-10, -10, 0), Eigen::Vector3d(10, 10, 10)};
  std::vector<ObjectSpec> objects;

  const ObjectSpec *find(ObjectId id) const;

  friend bool operator==(const Scene &a, const Scene &b)
  {
    return a.seed == b.seed && a.bounds.min() == b.bounds.min() && a.bounds.max() == b.bounds.max()
        && a.objects == b.objects;
  }
};

Eigen::AlignedBox3d default_bounds();

struct DepenetrationParams
{
  double eta = 4.0;
  double d_max = 0.5;
  double clearance = 0.1;
  int max_iters = 100;
};

/// One simultaneous potential-field update. A point coincident with another
/// moves d_max along a horizontal direction drawn from `rng`; its partner
/// moves the opposite way.
std::vector<Eigen::Vector3d> depenetrate_step(std::span<const Eigen::Vector3d> positions, double eta,
    double d_max, Rng &rng);

/// Iterates depenetrate_step until every pair of footprints is separated by
/// at least `clearance` along x or y. Footprints are boxes relative to each
/// position (points when empty); results keep footprints inside `bounds` when
/// given. Throws PlacementFailure after max_iters.
std::vector<Eigen::Vector3d> depenetrate(std::vector<Eigen::Vector3d> positions, const DepenetrationParams &params,
    std::uint64_t seed, std::span<const Eigen::AlignedBox3d> footprints = {},
    const std::optional<Eigen::AlignedBox3d> &bounds = std::nullopt);

inline constexpr std::size_t kMaxTreeGeons = 200;

/// Trunk plus n_levels of branches, n_branches per parent. Local frame: trunk
/// base at the origin, growing along +z. Ids count from 0.
std::vector<GeonInstance> gen_tree(double height, double radius_ratio, int n_branches, int n_levels,
    std::uint64_t seed);

/// Local frame: wall centered on the origin along x; stairs climbing +x from
/// the origin. Both rest on z = 0.
std::vector<GeonInstance> gen_wall(double length, double height, double thickness);
std::vector<GeonInstance> gen_stairs(int n_steps, double rise, double run, double width);

/// Local-frame geons of any object class, ids from 0, parent_object 0.
std::vector<GeonInstance> local_geons(ObjectClass c, const Params &params, std::uint64_t seed);

/// Regenerates every object's geons from (class, params, scene seed, id),
/// placing them by position and orientation. Instance ids run from 1 across
/// the scene in object order.
void expand(Scene &scene);

struct ClassMix
{
  std::array<double, 4> weights{1.0, 1.0, 1.0, 1.0}; // kObjectClasses order
};

/// "tree=2,wall=1" style; unnamed classes get weight 0.
ClassMix parse_mix(const std::string &text);

struct GenerateOptions
{
  Eigen::AlignedBox3d bounds = default_bounds();
  DepenetrationParams depenetration{};
};

Scene generate_scene(std::uint64_t seed, std::size_t n_objects, const ClassMix &mix,
    const GenerateOptions &options = {});

/// Canonical JSON form. Geons are embedded only when `with_geons`.
nlohmann::json scene_to_json(const Scene &scene, bool with_geons);
/// Validates every object; regenerates geons when the document has none.
Scene scene_from_json(const nlohmann::json &doc);

void save_scene(const Scene &scene, const std::filesystem::path &path, bool with_geons);
Scene load_scene(const std::filesystem::path &path);

} // namespace geoncog::worldgen
