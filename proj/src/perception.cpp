// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoncog/perception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace geoncog::perception {

using Eigen::Vector2d;
using Eigen::Vector3d;
using std::numbers::pi;

const char *to_string(ErrorKind kind)
{
  switch (kind) {
  case ErrorKind::PoseOutOfBounds:
    return "PoseOutOfBounds";
  case ErrorKind::UnknownClass:
    return "UnknownClass";
  case ErrorKind::InvalidArgument:
    return "InvalidArgument";
  }
  return "Unknown";
}

const char *to_string(Band b)
{
  switch (b) {
  case Band::Far:
    return "far";
  case Band::Mid:
    return "mid";
  case Band::Near:
    return "near";
  }
  return "?";
}

double AgentPose::heading_radians() const
{
  return heading * pi / 4.0;
}

bool inside(const worldgen::Scene &scene, const AgentPose &pose)
{
  const auto &b = scene.bounds;
  return pose.x >= b.min().x() && pose.x <= b.max().x() && pose.y >= b.min().y() && pose.y <= b.max().y()
      && pose.heading >= 0 && pose.heading < kHeadings;
}

Band band_for(double distance, double horizon_m)
{
  if (distance <= horizon_m / 3.0)
    return Band::Near;
  if (distance <= 2.0 * horizon_m / 3.0)
    return Band::Mid;
  return Band::Far;
}

std::vector<geons::ClassId> candidate_set(geons::ClassId true_class, Band band, const geons::Catalog &catalog)
{
  const geons::GeonClass *self = nullptr;
  try {
    self = &geons::find_class(catalog, true_class);
  } catch (const geons::GeonError &e) {
    throw PerceptionError(ErrorKind::UnknownClass, e.what());
  }
  std::vector<geons::ClassId> out;
  if (band == Band::Near) {
    out.push_back(true_class);
    return out;
  }
  for (const auto &c : catalog) {
    if (c.base != self->base)
      continue;
    if (band == Band::Mid && c.axis_line() != self->axis_line())
      continue;
    out.push_back(c.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

double wrap(double a)
{
  a = std::remainder(a, 2.0 * pi);
  return a <= -pi ? a + 2.0 * pi : a;
}

constexpr Interval kFullCircle{-2.0 * pi, 2.0 * pi};

Interval box_interval(const Eigen::AlignedBox3d &box, const Vector2d &eye)
{
  if (eye.x() >= box.min().x() && eye.x() <= box.max().x() && eye.y() >= box.min().y() && eye.y() <= box.max().y())
    return kFullCircle;
  Vector2d center(0.5 * (box.min().x() + box.max().x()), 0.5 * (box.min().y() + box.max().y()));
  double mid = std::atan2(center.y() - eye.y(), center.x() - eye.x());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : {box.min().x(), box.max().x()})
    for (double y : {box.min().y(), box.max().y()}) {
      double rel = wrap(std::atan2(y - eye.y(), x - eye.x()) - mid);
      lo = std::min(lo, rel);
      hi = std::max(hi, rel);
    }
  return {mid + lo, mid + hi};
}

bool is_full(const Interval &i) { return i.hi - i.lo >= 2.0 * pi; }

// Whether `target` lies inside the union of `cover`, on the circle.
bool covered(const Interval &target, const std::vector<Interval> &cover)
{
  constexpr double kTol = 1e-12;
  double mid = 0.5 * (target.lo + target.hi);
  double half = 0.5 * (target.hi - target.lo);
  std::vector<std::pair<double, double>> rel;
  for (const auto &c : cover) {
    if (is_full(c))
      return true;
    double w = 0.5 * (c.hi - c.lo);
    double centre = wrap(0.5 * (c.lo + c.hi) - mid);
    for (double shift : {-2.0 * pi, 0.0, 2.0 * pi})
      rel.emplace_back(centre + shift - w, centre + shift + w);
  }
  std::sort(rel.begin(), rel.end());
  double reach = -half;
  for (const auto &[lo, hi] : rel) {
    if (lo > reach + kTol)
      break;
    reach = std::max(reach, hi);
    if (reach >= half - kTol)
      return true;
  }
  return reach >= half - kTol;
}

Vector2d plan(const Vector3d &v) { return v.head<2>(); }

double plan_distance(const Eigen::AlignedBox3d &box, const Vector2d &eye)
{
  return (plan(box.center()) - eye).norm();
}

} // namespace

std::map<geons::ObjectId, Interval> occlusion_intervals(const worldgen::Scene &scene, const AgentPose &pose)
{
  std::map<geons::ObjectId, Interval> out;
  for (const auto &o : scene.objects)
    if (!o.geons.empty())
      out[o.id] = box_interval(worldgen::aggregate_box(o), pose.position());
  return out;
}

std::vector<Detection> sense(const worldgen::Scene &scene, const AgentPose &pose, const SensorConfig &sensor,
    const geons::Catalog &catalog)
{
  if (!(sensor.fov_degrees > 0.0 && sensor.fov_degrees <= 360.0) || !(sensor.horizon_m > 0.0))
    throw PerceptionError(ErrorKind::InvalidArgument, "fov must lie in (0, 360] and horizon be positive");
  if (!inside(scene, pose))
    throw PerceptionError(ErrorKind::PoseOutOfBounds,
        "pose (" + std::to_string(pose.x) + ", " + std::to_string(pose.y) + ") outside the scene");

  const Vector2d eye = pose.position();
  const Vector3d eye3(eye.x(), eye.y(), kEyeHeight);
  const double half_fov = 0.5 * sensor.fov_degrees * pi / 180.0;

  struct Shadow
  {
    double distance;
    Interval interval;
  };
  std::map<geons::ObjectId, Shadow> shadows;
  for (const auto &o : scene.objects)
    if (!o.geons.empty()) {
      auto box = worldgen::aggregate_box(o);
      shadows[o.id] = {plan_distance(box, eye), box_interval(box, eye)};
    }

  std::vector<Detection> out;
  for (const auto &o : scene.objects) {
    if (o.geons.empty())
      continue;
    const double own = shadows.at(o.id).distance;
    std::vector<Interval> nearer;
    for (const auto &[id, s] : shadows)
      if (id != o.id && s.distance < own)
        nearer.push_back(s.interval);

    for (const auto &g : o.geons) {
      Vector2d offset = plan(g.position) - eye;
      double distance = offset.norm();
      if (distance > sensor.horizon_m)
        continue;
      double bearing = distance > 0.0 ? std::atan2(offset.y(), offset.x()) : pose.heading_radians();
      if (std::abs(wrap(bearing - pose.heading_radians())) > half_fov + 1e-12)
        continue;
      auto box = geons::bounding_box(g);
      if (!nearer.empty() && covered(box_interval(box, eye), nearer))
        continue;

      Detection d;
      d.geon = g.instance_id;
      d.object = o.id;
      d.distance = distance;
      d.band = band_for(distance, sensor.horizon_m);
      d.candidates = candidate_set(g.class_id, d.band, catalog);
      Vector3d ray = g.position - eye3;
      for (auto f : geons::kFacets)
        if (geons::normal(f).dot(ray) < 0.0)
          d.visible_facets |= geons::zone(f);
      if (box.max().z() < kEyeHeight)
        d.visible_facets |= geons::zone(geons::Facet::Top);
      out.push_back(std::move(d));
    }
  }
  std::sort(out.begin(), out.end(), [](const Detection &a, const Detection &b) {
    return a.distance != b.distance ? a.distance < b.distance : a.geon < b.geon;
  });
  return out;
}

} // namespace geoncog::perception
