// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoncog/geons.hpp"
#include "geoncog/lattice.hpp"
#include "geoncog/perception.hpp"
#include "geoncog/worldgen.hpp"
#include "json.hpp"

namespace geoncog::explorer {

enum class ErrorKind
{
  NoGoals,
  EmptySelection,
  NoLegalAction,
  InvalidConfig,
};

const char *to_string(ErrorKind kind);

class ExplorerError : public std::runtime_error
{
 public:
  ExplorerError(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

using geons::ClassId;
using geons::InstanceId;
using geons::ObjectId;
using perception::AgentPose;
using Set = lattice::BitsetLattice::Set;

enum class Action : std::uint8_t
{
  Forward,
  TurnLeft,
  TurnRight,
  Stay,
};

inline constexpr std::array<Action, 4> kActions = {Action::Forward, Action::TurnLeft, Action::TurnRight, Action::Stay};

const char *to_string(Action a);

/// Pose after `a` ignoring obstacles. Forward steps to the neighbouring cell
/// along the heading (diagonals included).
AgentPose apply(const AgentPose &pose, Action a);

enum class PayoffMode
{
  ParJoin,
  ImplicationMeet,
};

const char *to_string(PayoffMode m);
PayoffMode payoff_mode_from_string(const std::string &s);

enum class Phase
{
  Approach,
  Orbit,
  Saturated,
};

const char *to_string(Phase p);

/// Reward universe: descriptor names in registration order.
class Universe
{
 public:
  std::size_t size() const { return names_.size(); }
  const std::string &name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string> &names() const { return names_; }
  std::optional<std::size_t> find(const std::string &name) const;
  std::size_t add(const std::string &name);

  Set empty_set() const { return Set(size()); }
  std::vector<std::string> names_of(const Set &s) const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
};

/// Bitmask over catalog positions (at most 36 classes).
using ClassMask = std::uint64_t;

struct GeonBelief
{
  ClassMask initial = 0;
  ClassMask current = 0;
  std::size_t facet_base = 0;                 // six facet descriptors from here
  std::map<std::size_t, std::size_t> variant_tag; // catalog position → tag index

  bool resolved() const { return (current & (current - 1)) == 0; }
};

struct ObjectBelief
{
  ObjectId id = 0;
  Phase phase = Phase::Approach;
  double attention = 0.0;
  std::map<InstanceId, GeonBelief> geons;
  Set block;            // every descriptor registered for the object
  Set cumulative_geons; // facet descriptors observed so far
  std::set<std::string> schemes_seen;
  std::set<int> cycle;        // octants visited since the last gain
  std::set<int> reachable;    // octants with a reachable viewpoint
  std::set<AgentPose> blind;  // viewpoints reached without seeing the object
  bool stalled = false;       // no pose left that could resolve a variant

  bool all_resolved() const;
  /// Candidate classes still open for one geon, ascending.
  std::vector<ClassId> variant_set(InstanceId geon, const geons::Catalog &catalog) const;
};

/// Powerset lattice over the discovered goals plus the free-movement goal
/// (bit 0); valuation is additive in goal attention.
struct GoalLattice
{
  std::vector<ObjectId> goals; // bit i + 1
  std::vector<double> attention;
  lattice::BitsetLattice lattice{1};

  Set subset(std::span<const ObjectId> ids) const;
  double valuation(const Set &s) const;
};

struct ExplorerConfig
{
  perception::SensorConfig sensor{};
  int capacity_k = 2;
  int horizon_steps = 2;
  PayoffMode payoff_mode = PayoffMode::ParJoin;
  std::size_t max_steps = 2000;
  std::map<ObjectId, double> salience; // overrides of the scene values
  geons::Catalog catalog = geons::default_catalog();
  std::optional<AgentPose> start;
};

void validate(const ExplorerConfig &config);

struct ExplorationState
{
  AgentPose pose;
  std::size_t step = 0;
  Universe universe;
  std::map<ObjectId, ObjectBelief> beliefs;
  GoalLattice goal_lattice;
  std::vector<ObjectId> selected_goals;
  int capacity = 0;
  std::set<int> surveyed; // indices into survey_points()

  std::vector<ObjectId> active_goals() const;
};

ExplorationState initial_state(const worldgen::Scene &scene, const ExplorerConfig &config);

/// Registers new objects and geons, narrows variant sets, records observed
/// facets and moves objects to Orbit once every known geon is resolved.
/// Returns the phase changes as (object, from, to).
std::vector<std::tuple<ObjectId, Phase, Phase>> discover(ExplorationState &state,
    std::span<const perception::Detection> detections, const worldgen::Scene &scene, const ExplorerConfig &config);

/// Top-valued subset of at most `capacity` active goals, ties to smaller ids.
std::vector<ObjectId> select_goals(const ExplorationState &state, int capacity);

/// Complement of the selected goals' descriptors within U.
Set free_move_payoff(const ExplorationState &state, std::span<const ObjectId> goals);
Set object_payoff(const ObjectBelief &belief, const Universe &universe);

/// Known objects with their known geons, true geometry.
worldgen::Scene world_model(const ExplorationState &state, const worldgen::Scene &scene);

/// Free cell for the agent: in bounds, clear of every geon footprint.
bool passable(const worldgen::Scene &scene, int x, int y);
/// Forward only when the next cell is passable.
bool legal(const worldgen::Scene &scene, const AgentPose &pose, Action a);

/// Payoff of an action sequence from the current state under the world model:
/// the lattice join, over the positions the system moves to, of the
/// mode-specific combination at that position.
Set play_payoff(const ExplorationState &state, const worldgen::Scene &model, std::span<const Action> actions,
    std::span<const ObjectId> goals, PayoffMode mode, const ExplorerConfig &config);

/// Value of the current knowledge under `mode` (no move).
Set current_payoff(const ExplorationState &state, std::span<const ObjectId> goals, PayoffMode mode);

struct Plan
{
  std::vector<Action> actions;
  Set payoff;
  bool improves = false; // |payoff| exceeds the current value
};

/// Best full-length play of the horizon game: largest payoff, then smaller
/// payoff encoding, then smaller action sequence.
Plan plan_step(const ExplorationState &state, const worldgen::Scene &model, std::span<const ObjectId> goals,
    const ExplorerConfig &config);

/// Octant viewpoint (cell and heading facing the object) around the known
/// footprint of an object; nullopt when it falls outside the bounds.
std::optional<AgentPose> octant_viewpoint(const worldgen::Scene &model, ObjectId object, int octant);

/// Saturated iff every reachable octant was visited since the last gain.
bool check_saturation(const ObjectBelief &belief);

/// Cells from which the agent looks around once no goal is left: the
/// centres of the four quadrants of the bounds.
std::array<std::pair<int, int>, 4> survey_points(const worldgen::Scene &scene);

/// First action of a shortest path to any pose satisfying `goal`.
std::optional<Action> navigate(const worldgen::Scene &model, const AgentPose &from,
    const std::function<bool(const AgentPose &)> &goal);

struct DetectionSummary
{
  InstanceId geon;
  ObjectId object;
  perception::Band band;
  std::vector<ClassId> candidates;
  double distance;
};

struct InsertRecord
{
  ObjectId object;
  std::string encoding;
  geons::InsertResult result;
};

struct TraceEvent
{
  std::size_t step = 0;
  AgentPose pose;
  std::vector<DetectionSummary> detections;
  std::vector<ObjectId> selected_goals;
  int capacity = 0;
  std::map<ObjectId, std::string> goal_payoffs; // canonical encodings over U
  std::string play_payoff;
  std::size_t universe_size = 0;
  Action action = Action::Stay;
  std::string source; // planner | navigate | survey
  bool glance = false; // detections include a look around in place
  bool blocked = false;
  std::vector<std::tuple<ObjectId, Phase, Phase>> transitions;
  std::vector<InsertRecord> inserts;
};

nlohmann::json to_json(const TraceEvent &e);
/// One canonical line per event (sorted keys, floats rounded to 1e-6).
std::string trace_line(const TraceEvent &e);

enum class Termination
{
  NoGoals,
  MaxSteps,
};

struct EpisodeResult
{
  std::vector<TraceEvent> trace;
  geons::SchemaStore deltas; // keyed "object-<id>"
  ExplorationState final_state;
  Termination termination = Termination::NoGoals;
};

/// Called after every step with the state that produced the event.
using StepObserver = std::function<void(const ExplorationState &, const TraceEvent &)>;

EpisodeResult run_episode(const worldgen::Scene &scene, const ExplorerConfig &config,
    const StepObserver &observer = {});

std::string object_key(ObjectId id);

} // namespace geoncog::explorer
