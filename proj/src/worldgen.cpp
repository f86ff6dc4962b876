// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoncog/worldgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace geoncog::worldgen {

using Eigen::Vector3d;

const char *to_string(ErrorKind kind)
{
  switch (kind) {
  case ErrorKind::PlacementFailure:
    return "PlacementFailure";
  case ErrorKind::TooManyGeons:
    return "TooManyGeons";
  case ErrorKind::InvalidParams:
    return "InvalidParams";
  case ErrorKind::ParseError:
    return "ParseError";
  case ErrorKind::InvariantViolation:
    return "InvariantViolation";
  }
  return "Unknown";
}

const char *to_string(ObjectClass c)
{
  switch (c) {
  case ObjectClass::Tree:
    return "tree";
  case ObjectClass::Wall:
    return "wall";
  case ObjectClass::Stairs:
    return "stairs";
  case ObjectClass::Primitive:
    return "primitive";
  }
  return "?";
}

ObjectClass object_class_from_string(const std::string &s)
{
  for (auto c : kObjectClasses)
    if (s == to_string(c))
      return c;
  throw WorldError(ErrorKind::ParseError, "unknown object class '" + s + "'");
}

namespace {

constexpr ParamRange kTreeParams[] = {
    {"h", 0.5, 2.0, false}, {"k", 0.125, 0.5, false}, {"n_b", 1, 2, true}, {"n_l", 0, 2, true}};
constexpr ParamRange kWallParams[] = {
    {"height", 0.5, 3.0, false}, {"length", 0.5, 8.0, false}, {"thickness", 0.5, 1.0, false}};
constexpr ParamRange kStairsParams[] = {
    {"n_steps", 1, 6, true}, {"rise", 0.5, 1.0, false}, {"run", 0.5, 1.0, false}, {"width", 0.5, 2.0, false}};
constexpr ParamRange kPrimitiveParams[] = {
    {"class", 1, 16, true}, {"sx", 0.5, 2.0, false}, {"sy", 0.5, 2.0, false}, {"sz", 0.5, 2.0, false}};

double clamp_scale(double v) { return std::clamp(v, geons::kMinScale, geons::kMaxScale); }

GeonInstance make_geon(geons::ClassId cls, const Vector3d &center, const Vector3d &scale)
{
  GeonInstance g;
  g.class_id = cls;
  g.position = center;
  g.scale = scale;
  return g;
}

void number(std::vector<GeonInstance> &gs)
{
  for (std::size_t i = 0; i < gs.size(); ++i)
    gs[i].instance_id = static_cast<geons::InstanceId>(i);
}

} // namespace

std::span<const ParamRange> param_ranges(ObjectClass c)
{
  switch (c) {
  case ObjectClass::Tree:
    return kTreeParams;
  case ObjectClass::Wall:
    return kWallParams;
  case ObjectClass::Stairs:
    return kStairsParams;
  case ObjectClass::Primitive:
    return kPrimitiveParams;
  }
  return {};
}

void validate_params(ObjectClass c, const Params &params)
{
  auto ranges = param_ranges(c);
  for (const auto &[name, value] : params)
    if (std::none_of(ranges.begin(), ranges.end(), [&](const ParamRange &r) { return name == r.name; }))
      throw WorldError(ErrorKind::InvalidParams, std::string("unknown parameter '") + name + "' for " + to_string(c));
  for (const auto &r : ranges) {
    auto it = params.find(r.name);
    if (it == params.end())
      throw WorldError(ErrorKind::InvalidParams, std::string("missing parameter '") + r.name + "'");
    double v = it->second;
    if (!(v >= r.lo && v <= r.hi) || (r.integer && v != std::floor(v))) {
      std::ostringstream msg;
      msg << "parameter '" << r.name << "' = " << v << " outside [" << r.lo << ", " << r.hi << "]"
          << (r.integer ? " or not an integer" : "");
      throw WorldError(ErrorKind::InvalidParams, msg.str());
    }
  }
}

Eigen::AlignedBox3d aggregate_box(const ObjectSpec &o)
{
  Eigen::AlignedBox3d box;
  for (const auto &g : o.geons)
    box.extend(geons::bounding_box(g));
  return box;
}

const ObjectSpec *Scene::find(ObjectId id) const
{
  auto it = std::find_if(objects.begin(), objects.end(), [&](const ObjectSpec &o) { return o.id == id; });
  return it == objects.end() ? nullptr : &*it;
}

Eigen::AlignedBox3d default_bounds()
{
  return Scene{}.bounds;
}

// Placement ///////////////////////////////////////////////////////////////////

std::vector<Vector3d> depenetrate_step(std::span<const Vector3d> positions, double eta, double d_max, Rng &rng)
{
  constexpr double kCoincident = 1e-9;
  const auto n = positions.size();
  std::vector<Vector3d> out(positions.begin(), positions.end());

  // Coincident pairs first, in index order, so the draws are reproducible.
  std::vector<Vector3d> split(n, Vector3d::Zero());
  std::vector<bool> coincident(n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((positions[j] - positions[i]).norm() < kCoincident) {
        double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        Vector3d u(std::cos(angle), std::sin(angle), 0.0);
        split[i] += u;
        split[j] -= u;
        coincident[i] = coincident[j] = true;
      }

  for (std::size_t i = 0; i < n; ++i) {
    if (coincident[i]) {
      if (split[i].norm() > kCoincident)
        out[i] += d_max * split[i].normalized();
      continue;
    }
    Vector3d direction = Vector3d::Zero();
    double magnitude = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i)
        continue;
      Vector3d diff = positions[i] - positions[j];
      double d = diff.norm();
      magnitude += eta / (d * d);
      direction += diff / (d * d * d);
    }
    if (direction.norm() > 0.0)
      out[i] += std::min(d_max, magnitude) * direction.normalized();
  }
  return out;
}

namespace {

Eigen::AlignedBox3d footprint(std::span<const Eigen::AlignedBox3d> fps, std::size_t i, const Vector3d &p)
{
  if (fps.empty())
    return Eigen::AlignedBox3d(p, p);
  return Eigen::AlignedBox3d(fps[i].min() + p, fps[i].max() + p);
}

bool crowded(std::span<const Vector3d> p, std::span<const Eigen::AlignedBox3d> fps, double clearance)
{
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      auto a = footprint(fps, i, p[i]);
      auto b = footprint(fps, j, p[j]);
      bool apart = false;
      for (int k = 0; k < 2; ++k)
        apart = apart || b.min()[k] - a.max()[k] >= clearance || a.min()[k] - b.max()[k] >= clearance;
      if (!apart)
        return true;
    }
  return false;
}

// Keeps the footprint inside the bounds in plan; centers it when too large.
Vector3d clamp_into(const Vector3d &p, const Eigen::AlignedBox3d &bounds, const Eigen::AlignedBox3d &fp)
{
  Vector3d out = p;
  for (int k = 0; k < 2; ++k) {
    double lo = bounds.min()[k] - fp.min()[k];
    double hi = bounds.max()[k] - fp.max()[k];
    out[k] = lo <= hi ? std::clamp(p[k], lo, hi) : 0.5 * (lo + hi);
  }
  out[2] = std::clamp(p[2], bounds.min()[2], bounds.max()[2]);
  return out;
}

} // namespace

std::vector<Vector3d> depenetrate(std::vector<Vector3d> positions, const DepenetrationParams &params,
    std::uint64_t seed, std::span<const Eigen::AlignedBox3d> footprints,
    const std::optional<Eigen::AlignedBox3d> &bounds)
{
  if (!(params.eta > 0.0) || !(params.d_max > 0.0))
    throw WorldError(ErrorKind::InvalidParams, "depenetration needs eta > 0 and d_max > 0");
  if (!footprints.empty() && footprints.size() != positions.size())
    throw WorldError(ErrorKind::InvalidParams, "one footprint per position required");
  const Eigen::AlignedBox3d point(Vector3d::Zero(), Vector3d::Zero());
  Rng rng(seed);
  for (int iter = 0; iter < params.max_iters; ++iter) {
    if (!crowded(positions, footprints, params.clearance))
      return positions;
    positions = depenetrate_step(positions, params.eta, params.d_max, rng);
    if (bounds)
      for (std::size_t i = 0; i < positions.size(); ++i)
        positions[i] = clamp_into(positions[i], *bounds, footprints.empty() ? point : footprints[i]);
  }
  if (crowded(positions, footprints, params.clearance))
    throw WorldError(ErrorKind::PlacementFailure,
        "objects still overlap after " + std::to_string(params.max_iters) + " iterations");
  return positions;
}

// Composite objects ///////////////////////////////////////////////////////////

namespace {

std::size_t tree_size(int n_branches, int n_levels)
{
  std::size_t total = 0;
  std::size_t level = 1;
  for (int d = 0; d <= n_levels; ++d) {
    total += level;
    if (total > kMaxTreeGeons)
      return kMaxTreeGeons + 1;
    level *= static_cast<std::size_t>(n_branches);
  }
  return total;
}

struct Limb
{
  Vector3d base;
  Vector3d axis; // axis-aligned unit vector
  double length;
  double width;
};

GeonInstance limb_geon(geons::ClassId cls, const Limb &l)
{
  Vector3d scale = Vector3d::Constant(l.width);
  for (int k = 0; k < 3; ++k)
    if (l.axis[k] != 0.0)
      scale[k] = l.length;
  return make_geon(cls, l.base + 0.5 * l.length * l.axis, scale);
}

void grow(const Limb &parent, int levels_left, int n_branches, Rng &rng, std::vector<GeonInstance> &out)
{
  if (levels_left == 0)
    return;
  static const Vector3d kDirections[] = {Vector3d::UnitX(), -Vector3d::UnitX(), Vector3d::UnitY(),
      -Vector3d::UnitY(), Vector3d::UnitZ()};
  std::vector<Vector3d> allowed;
  for (const auto &d : kDirections)
    if (std::abs(d.dot(parent.axis)) < 0.5)
      allowed.push_back(d);

  for (int b = 0; b < n_branches; ++b) {
    double t = rng.uniform(0.5, 0.9);
    const Vector3d &dir = allowed[rng.below(allowed.size())];
    Vector3d attach = parent.base + t * parent.length * parent.axis;
    Limb child{attach + 0.5 * parent.width * dir, dir, clamp_scale(1.5 * (1.0 - t) * parent.length),
        clamp_scale(0.5 * parent.width)};
    out.push_back(limb_geon(geons::kWedgeClass, child));
    grow(child, levels_left - 1, n_branches, rng, out);
  }
}

} // namespace

std::vector<GeonInstance> gen_tree(double height, double radius_ratio, int n_branches, int n_levels,
    std::uint64_t seed)
{
  if (!(height > 0.0) || !(radius_ratio > 0.0) || n_branches < 1 || n_levels < 0)
    throw WorldError(ErrorKind::InvalidParams, "tree needs h > 0, k > 0, n_b >= 1, n_l >= 0");
  if (tree_size(n_branches, n_levels) > kMaxTreeGeons)
    throw WorldError(ErrorKind::TooManyGeons, "tree would exceed 200 geons");

  Rng rng(seed);
  std::vector<GeonInstance> out;
  Limb trunk{Vector3d::Zero(), Vector3d::UnitZ(), clamp_scale(height), clamp_scale(2.0 * radius_ratio * height)};
  out.push_back(limb_geon(geons::kTrunkClass, trunk));
  grow(trunk, n_levels, n_branches, rng, out);
  number(out);
  return out;
}

std::vector<GeonInstance> gen_wall(double length, double height, double thickness)
{
  if (!(length > 0.0) || !(height > 0.0) || !(thickness > 0.0))
    throw WorldError(ErrorKind::InvalidParams, "wall dimensions must be positive");
  const Vector3d dims(length, thickness, height);
  std::array<int, 3> count{};
  Vector3d tile;
  for (int k = 0; k < 3; ++k) {
    count[k] = std::max(1, static_cast<int>(std::ceil(dims[k] / geons::kMaxScale - 1e-9)));
    tile[k] = std::max(geons::kMinScale, dims[k] / count[k]);
  }
  const Vector3d origin(-0.5 * tile[0] * count[0], -0.5 * tile[1] * count[1], 0.0);
  std::vector<GeonInstance> out;
  for (int iz = 0; iz < count[2]; ++iz)
    for (int iy = 0; iy < count[1]; ++iy)
      for (int ix = 0; ix < count[0]; ++ix) {
        Vector3d center = origin + Vector3d((ix + 0.5) * tile[0], (iy + 0.5) * tile[1], (iz + 0.5) * tile[2]);
        out.push_back(make_geon(geons::kBrickClass, center, tile));
      }
  number(out);
  return out;
}

std::vector<GeonInstance> gen_stairs(int n_steps, double rise, double run, double width)
{
  auto in_scale = [](double v) { return v >= geons::kMinScale && v <= geons::kMaxScale; };
  if (n_steps < 1 || !in_scale(rise) || !in_scale(run) || !in_scale(width))
    throw WorldError(ErrorKind::InvalidParams, "stairs need n_steps >= 1 and rise, run, width in [0.5, 2]");
  std::vector<GeonInstance> out;
  for (int i = 0; i < n_steps; ++i)
    out.push_back(make_geon(geons::kBrickClass, Vector3d((i + 0.5) * run, 0.0, (i + 0.5) * rise),
        Vector3d(run, width, rise)));
  number(out);
  return out;
}

std::vector<GeonInstance> local_geons(ObjectClass c, const Params &params, std::uint64_t seed)
{
  validate_params(c, params);
  auto p = [&](const char *name) { return params.at(name); };
  auto i = [&](const char *name) { return static_cast<int>(params.at(name)); };
  switch (c) {
  case ObjectClass::Tree:
    return gen_tree(p("h"), p("k"), i("n_b"), i("n_l"), seed);
  case ObjectClass::Wall:
    return gen_wall(p("length"), p("height"), p("thickness"));
  case ObjectClass::Stairs:
    return gen_stairs(i("n_steps"), p("rise"), p("run"), p("width"));
  case ObjectClass::Primitive: {
    Vector3d scale(p("sx"), p("sy"), p("sz"));
    return {make_geon(static_cast<geons::ClassId>(i("class")), Vector3d(0, 0, 0.5 * scale.z()), scale)};
  }
  }
  return {};
}

namespace {

// Exact quarter-turn rotation about +z.
Vector3d quarter_turn(const Vector3d &v, int degrees)
{
  switch (((degrees / 90) % 4 + 4) % 4) {
  case 1:
    return {-v.y(), v.x(), v.z()};
  case 2:
    return {-v.x(), -v.y(), v.z()};
  case 3:
    return {v.y(), -v.x(), v.z()};
  default:
    return v;
  }
}

std::vector<GeonInstance> placed_geons(const ObjectSpec &o, std::uint64_t scene_seed)
{
  auto gs = local_geons(o.object_class, o.params, mix_seed(scene_seed, o.id));
  bool swap = (o.orientation / 90) % 2 != 0;
  for (auto &g : gs) {
    g.position = o.position + quarter_turn(g.position, o.orientation);
    if (swap)
      std::swap(g.scale.x(), g.scale.y());
    g.parent_object = o.id;
  }
  return gs;
}

Eigen::AlignedBox3d local_footprint(const ObjectSpec &o, std::uint64_t scene_seed)
{
  ObjectSpec at_origin = o;
  at_origin.position = Vector3d::Zero();
  at_origin.geons = placed_geons(at_origin, scene_seed);
  return aggregate_box(at_origin);
}

} // namespace

void expand(Scene &scene)
{
  geons::InstanceId next = 1;
  for (auto &o : scene.objects) {
    o.geons = placed_geons(o, scene.seed);
    for (auto &g : o.geons)
      g.instance_id = next++;
  }
}

ClassMix parse_mix(const std::string &text)
{
  ClassMix mix;
  mix.weights.fill(0.0);
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw WorldError(ErrorKind::ParseError, "mix entry '" + item + "' is not name=weight");
    auto c = object_class_from_string(item.substr(0, eq));
    double w = 0.0;
    try {
      w = std::stod(item.substr(eq + 1));
    } catch (const std::exception &) {
      throw WorldError(ErrorKind::ParseError, "bad weight in '" + item + "'");
    }
    mix.weights[static_cast<std::size_t>(c)] = w;
  }
  return mix;
}

Scene generate_scene(std::uint64_t seed, std::size_t n_objects, const ClassMix &mix, const GenerateOptions &options)
{
  double total = 0.0;
  for (double w : mix.weights) {
    if (!(w >= 0.0))
      throw WorldError(ErrorKind::InvalidParams, "class weights must be non-negative");
    total += w;
  }
  if (n_objects < 1 || !(total > 0.0))
    throw WorldError(ErrorKind::InvalidParams, "need at least one object and a positive class weight");

  Scene scene;
  scene.seed = seed;
  scene.bounds = options.bounds;
  Rng rng(mix_seed(seed, 0));
  std::vector<Vector3d> positions;
  std::vector<Eigen::AlignedBox3d> footprints;

  for (std::size_t i = 0; i < n_objects; ++i) {
    ObjectSpec o;
    o.id = static_cast<ObjectId>(i + 1);
    double pick = rng.uniform() * total;
    std::size_t c = 0;
    while (c + 1 < mix.weights.size() && (mix.weights[c] == 0.0 || pick >= mix.weights[c])) {
      pick -= mix.weights[c];
      ++c;
    }
    o.object_class = kObjectClasses[c];
    o.orientation = 90 * rng.range(0, 3);
    for (const auto &r : param_ranges(o.object_class))
      o.params[r.name] = r.integer ? rng.range(static_cast<int>(r.lo), static_cast<int>(r.hi)) : rng.uniform(r.lo, r.hi);
    o.salience = rng.uniform();

    auto fp = local_footprint(o, seed);
    Vector3d p(rng.uniform(scene.bounds.min().x(), scene.bounds.max().x()),
        rng.uniform(scene.bounds.min().y(), scene.bounds.max().y()), scene.bounds.min().z());
    positions.push_back(clamp_into(p, scene.bounds, fp));
    footprints.push_back(fp);
    scene.objects.push_back(std::move(o));
  }

  positions = depenetrate(std::move(positions), options.depenetration, mix_seed(seed, 1), footprints, scene.bounds);
  for (std::size_t i = 0; i < n_objects; ++i)
    scene.objects[i].position = positions[i];
  expand(scene);
  return scene;
}

} // namespace geoncog::worldgen
