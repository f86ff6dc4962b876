// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoncog/geons.hpp"
#include "geoncog/worldgen.hpp"

namespace geoncog::perception {

enum class ErrorKind
{
  PoseOutOfBounds,
  UnknownClass,
  InvalidArgument,
};

const char *to_string(ErrorKind kind);

class PerceptionError : public std::runtime_error
{
 public:
  PerceptionError(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline constexpr double kEyeHeight = 1.5;
inline constexpr int kHeadings = 8;

/// Grid pose: integer meters on the ground plane, heading k points 45·k
/// degrees counter-clockwise from +x.
struct AgentPose
{
  int x = 0;
  int y = 0;
  int heading = 0;

  Eigen::Vector2d position() const { return {double(x), double(y)}; }
  double heading_radians() const;

  friend bool operator==(const AgentPose &, const AgentPose &) = default;
  friend auto operator<=>(const AgentPose &, const AgentPose &) = default;
};

bool inside(const worldgen::Scene &scene, const AgentPose &pose);

enum class Band
{
  Far,
  Mid,
  Near,
};

const char *to_string(Band b);

/// Near up to a third of the horizon, Mid up to two thirds, Far beyond.
Band band_for(double distance, double horizon_m);

/// Near → the class itself; Mid → classes sharing base and axis line;
/// Far → classes sharing base. Ascending ids.
std::vector<geons::ClassId> candidate_set(geons::ClassId true_class, Band band, const geons::Catalog &catalog);

struct SensorConfig
{
  double fov_degrees = 90.0;
  double horizon_m = 15.0;
};

struct Detection
{
  geons::InstanceId geon = 0;
  geons::ObjectId object = 0;
  std::vector<geons::ClassId> candidates;
  double distance = 0.0; // plan distance to the geon center
  geons::ZoneSet visible_facets = 0;
  Band band = Band::Far;

  friend bool operator==(const Detection &, const Detection &) = default;
};

/// Azimuth interval [lo, hi] in radians, hi - lo ≤ 2π; lo may be below -π.
struct Interval
{
  double lo;
  double hi;
};

/// Per-object azimuth intervals seen from `pose`, from aggregate box corners.
std::map<geons::ObjectId, Interval> occlusion_intervals(const worldgen::Scene &scene, const AgentPose &pose);

/// Detections sorted by (distance, geon id).
std::vector<Detection> sense(const worldgen::Scene &scene, const AgentPose &pose, const SensorConfig &sensor,
    const geons::Catalog &catalog);

} // namespace geoncog::perception
