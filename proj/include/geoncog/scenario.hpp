// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoncog/explorer.hpp"
#include "geoncog/worldgen.hpp"
#include "json.hpp"

namespace geoncog::scenario {

enum class ErrorKind
{
  ParseError,
  ConfigInvalid,
};

class ScenarioError : public std::runtime_error
{
 public:
  ScenarioError(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Scenario file, version 1. Keys (all optional except `version`):
///
///   seed           scene seed when no scene is given (default 0)
///   scene          path relative to the config file, or an inline scene
///   objects, mix   size and class weights of a generated scene (3, all 1)
///   fov_degrees    90
///   horizon_m      15
///   capacity_k     2
///   horizon_steps  2
///   payoff_mode    "par_join" | "implication_meet"
///   max_steps      2000
///   salience       {"<object id>": score}
///   catalog        path to a catalog file
///   start          {"x", "y", "heading"}
///
/// Unknown keys are rejected.
struct ScenarioConfig
{
  std::uint64_t seed = 0;
  worldgen::Scene scene;
  explorer::ExplorerConfig explorer;
};

ScenarioConfig config_from_json(const nlohmann::json &doc, const std::filesystem::path &base_dir = ".");
ScenarioConfig load_config(const std::filesystem::path &path);

/// Canonical trace text: one line per event.
std::string trace_text(const std::vector<explorer::TraceEvent> &trace);

struct ReplayReport
{
  bool match = false;
  std::size_t first_difference = 0; // line number, 1-based, when !match
  std::string detail;
};

/// Re-runs the episode and compares traces byte for byte.
ReplayReport replay(const ScenarioConfig &config, const std::string &recorded_trace);

} // namespace geoncog::scenario
