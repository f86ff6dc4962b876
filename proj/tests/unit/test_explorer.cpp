// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <algorithm>

#include "builders.hpp"
#include "geoncog/explorer.hpp"
#include "geoncog/scenario.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace geoncog::explorer;
using geoncog::perception::Band;
using geoncog::perception::Detection;
using geoncog::worldgen::Scene;
using testing::add_block;

namespace {

const std::filesystem::path kFixtures = GEONCOG_FIXTURE_DIR;

Detection detection(ObjectId object, InstanceId geon, Band band, std::vector<ClassId> candidates, double distance)
{
  Detection d;
  d.object = object;
  d.geon = geon;
  d.band = band;
  d.candidates = std::move(candidates);
  d.distance = distance;
  return d;
}

ExplorerConfig config_at(int x, int y, int heading)
{
  ExplorerConfig c;
  c.start = AgentPose{x, y, heading};
  return c;
}

// Three blocks at increasing distance along +x, sensed from the origin.
struct Row
{
  Scene scene;
  ExplorerConfig config = config_at(0, 0, 0);
  ExplorationState state;

  Row()
  {
    add_block(scene, 1, 3, 0, Eigen::Vector3d::Ones(), 1, 0.0);
    add_block(scene, 2, 7, 2, Eigen::Vector3d::Ones(), 9, 0.5);
    add_block(scene, 3, 12, -3, Eigen::Vector3d::Ones(), 5, 0.2);
    state = initial_state(scene, config);
    discover(state, geoncog::perception::sense(scene, state.pose, config.sensor, config.catalog), scene, config);
  }
};

} // namespace

TEST_CASE("actions")
{
  AgentPose p{0, 0, 0};
  CHECK(apply(p, Action::Forward) == AgentPose{1, 0, 0});
  CHECK(apply(AgentPose{0, 0, 3}, Action::Forward) == AgentPose{-1, 1, 3});
  CHECK(apply(p, Action::TurnLeft).heading == 1);
  CHECK(apply(p, Action::TurnRight).heading == 7);
  CHECK(apply(p, Action::Stay) == p);

  Scene scene;
  add_block(scene, 1, 1, 0);
  CHECK_FALSE(legal(scene, p, Action::Forward));
  CHECK(legal(scene, p, Action::TurnLeft));
  CHECK_FALSE(passable(scene, 11, 0)); // outside the default bounds
  CHECK(passable(scene, 3, 0));
}

TEST_CASE("config validation")
{
  ExplorerConfig c;
  CHECK_NOTHROW(validate(c));
  c.capacity_k = 0;
  CHECK_THROWS_AS(validate(c), ExplorerError);
  c = {};
  c.sensor.fov_degrees = 400;
  CHECK_THROWS_AS(validate(c), ExplorerError);
  c = {};
  c.horizon_steps = 0;
  CHECK_THROWS_AS(validate(c), ExplorerError);
  CHECK(payoff_mode_from_string("implication_meet") == PayoffMode::ImplicationMeet);
  CHECK_THROWS_AS(payoff_mode_from_string("max"), ExplorerError);
}

TEST_CASE("start pose")
{
  Scene scene;
  add_block(scene, 1, 0, 0);
  auto s = initial_state(scene, {});
  CHECK(passable(scene, s.pose.x, s.pose.y));
  CHECK(std::max(std::abs(s.pose.x), std::abs(s.pose.y)) == 1);
  CHECK_THROWS(initial_state(scene, config_at(40, 0, 0)));
}

TEST_CASE("discover")
{
  Scene scene;
  add_block(scene, 1, 3, 0, Eigen::Vector3d::Ones(), 1, 0.25);
  auto config = config_at(0, 0, 0);
  auto state = initial_state(scene, config);

  CHECK(discover(state, {}, scene, config).empty());
  CHECK(state.beliefs.empty());
  CHECK(state.universe.size() == 0);

  std::vector<Detection> far{detection(1, 1, Band::Far, {1, 2, 3, 4, 5, 6, 7, 8}, 4.0)};
  discover(state, far, scene, config);
  REQUIRE(state.beliefs.size() == 1);
  const auto &b = state.beliefs.at(1);
  CHECK(b.phase == Phase::Approach);
  CHECK(b.variant_set(1, config.catalog) == std::vector<ClassId>{1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(b.attention == doctest::Approx(0.25 + 1.0 / 5.0));
  CHECK(state.goal_lattice.goals == std::vector<ObjectId>{1});
  CHECK(state.universe.size() == 6 + 8); // facets plus variant tags
  CHECK(object_payoff(b, state.universe).none());

  // Rediscovery adds no goal and narrows the variants.
  std::vector<Detection> mid{detection(1, 1, Band::Mid, {1, 2, 3, 4}, 2.0)};
  discover(state, mid, scene, config);
  CHECK(state.beliefs.size() == 1);
  CHECK(state.goal_lattice.goals.size() == 1);
  CHECK(state.beliefs.at(1).variant_set(1, config.catalog) == std::vector<ClassId>{1, 2, 3, 4});
  auto reward = object_payoff(state.beliefs.at(1), state.universe);
  CHECK(reward.count() == 4);
  for (auto name : state.universe.names_of(reward))
    CHECK((name.ends_with("/c5") || name.ends_with("/c6") || name.ends_with("/c7") || name.ends_with("/c8")));

  // Down to one variant: Orbit, every tag in the reward.
  std::vector<Detection> near{detection(1, 1, Band::Near, {1}, 1.0)};
  near[0].visible_facets = geoncog::geons::zone(geoncog::geons::Facet::Left);
  auto moved = discover(state, near, scene, config);
  REQUIRE(moved.size() == 1);
  CHECK(moved[0] == std::tuple{ObjectId{1}, Phase::Approach, Phase::Orbit});
  CHECK(state.beliefs.at(1).phase == Phase::Orbit);
  reward = object_payoff(state.beliefs.at(1), state.universe);
  CHECK(reward.count() == 8 + 1);
}

TEST_CASE("orbit reward accumulates across viewpoints")
{
  ExplorationState state;
  ObjectBelief b;
  b.id = 1;
  b.phase = Phase::Orbit;
  for (auto name : {"A", "B", "C"})
    state.universe.add(name);
  b.cumulative_geons = Set(3);
  b.cumulative_geons.set(0).set(1); // {A, B}
  auto first = object_payoff(b, state.universe);
  b.cumulative_geons.set(2); // then {B, C}
  auto second = object_payoff(b, state.universe);
  CHECK(first.is_subset_of(second));
  CHECK(state.universe.names_of(second) == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("goal selection")
{
  Row row;
  auto &state = row.state;
  REQUIRE(state.beliefs.size() == 3);
  CHECK(select_goals(state, 3) == std::vector<ObjectId>{1, 2, 3});
  // Attention: 1 → 1/4, 2 → 0.5 + 1/(1+√53) ≈ 0.62, 3 → 0.2 + 1/(1+√153) ≈ 0.275.
  CHECK(select_goals(state, 2) == std::vector<ObjectId>{2, 3});
  CHECK(select_goals(state, 1) == std::vector<ObjectId>{2});
  for (int k = 1; k <= 3; ++k)
    CHECK(select_goals(state, k) == oracle::brute_select(state, k));

  ExplorationState single = state;
  single.beliefs.erase(2);
  single.beliefs.erase(3);
  CHECK(select_goals(single, 3) == std::vector<ObjectId>{1});

  for (auto &[id, b] : state.beliefs)
    b.phase = Phase::Saturated;
  try {
    select_goals(state, 2);
    FAIL("expected NoGoals");
  } catch (const ExplorerError &e) {
    CHECK(e.kind() == ErrorKind::NoGoals);
  }
  CHECK_THROWS_AS(select_goals(row.state, 0), ExplorerError);
}

TEST_CASE("goal selection matches exhaustive subset search on episode states")
{
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto scene = geoncog::worldgen::generate_scene(seed, 4, {});
    ExplorerConfig config;
    config.max_steps = 120;
    run_episode(scene, config, [&](const ExplorationState &s, const TraceEvent &) {
      if (s.active_goals().empty())
        return;
      for (int k = 1; k <= 4; ++k) {
        CHECK(select_goals(s, k) == oracle::brute_select(s, k));
        ++checked;
      }
    });
  }
  CHECK(checked > 100);
}

TEST_CASE("goal lattice")
{
  Row row;
  const auto &gl = row.state.goal_lattice;
  CHECK(gl.goals == std::vector<ObjectId>{1, 2, 3});
  CHECK(gl.lattice.universe_size() == 4);
  std::vector<ObjectId> a{1}, ab{1, 2};
  auto sa = gl.subset(a), sab = gl.subset(ab);
  CHECK(gl.lattice.join(sa, gl.subset(std::vector<ObjectId>{2})) == sab);
  CHECK(gl.valuation(sa) <= gl.valuation(sab));
  CHECK(gl.valuation(gl.lattice.top()) == doctest::Approx(gl.attention[0] + gl.attention[1] + gl.attention[2]));
}

TEST_CASE("free-move payoff")
{
  ExplorationState empty;
  CHECK(free_move_payoff(empty, {}).size() == 0);

  Row row;
  auto &state = row.state;
  const auto u = state.universe.size();
  CHECK(free_move_payoff(state, {}).count() == u);
  std::vector<ObjectId> all{1, 2, 3};
  CHECK(free_move_payoff(state, all).none());
  std::vector<ObjectId> one{1};
  auto rest = free_move_payoff(state, one);
  CHECK(rest == (state.beliefs.at(2).block | state.beliefs.at(3).block));
  CHECK((rest & state.beliefs.at(1).block).none());
}

TEST_CASE("play payoff")
{
  Row row;
  auto model = world_model(row.state, row.scene);
  std::vector<ObjectId> one{3}, two{2, 3};
  CHECK(play_payoff(row.state, model, {}, one, PayoffMode::ParJoin, row.config).none());
  CHECK_THROWS_AS(play_payoff(row.state, model, {}, std::vector<ObjectId>{}, PayoffMode::ParJoin, row.config),
      ExplorerError);

  std::vector<Action> path{Action::Forward, Action::Forward, Action::Forward, Action::Stay};
  for (std::size_t n = 0; n < path.size(); ++n) {
    std::span<const Action> prefix(path.data(), n), longer(path.data(), n + 1);
    auto a = play_payoff(row.state, model, prefix, one, PayoffMode::ParJoin, row.config);
    auto b = play_payoff(row.state, model, longer, one, PayoffMode::ParJoin, row.config);
    CHECK(a.is_subset_of(b));
    auto both = play_payoff(row.state, model, longer, two, PayoffMode::ParJoin, row.config);
    CHECK(b.is_subset_of(both));
  }
}

TEST_CASE("closing the last variant pays the whole tag block")
{
  // Object 1 one step beyond the Near band: a forward step resolves it.
  Scene scene;
  add_block(scene, 1, 6, 0, Eigen::Vector3d::Ones(), 3);
  auto config = config_at(0, 0, 0);
  auto state = initial_state(scene, config);
  discover(state, geoncog::perception::sense(scene, state.pose, config.sensor, config.catalog), scene, config);
  REQUIRE(state.beliefs.at(1).phase == Phase::Approach);
  auto model = world_model(state, scene);
  std::vector<ObjectId> goal{1};
  std::vector<Action> step{Action::Forward};
  auto payoff = play_payoff(state, model, step, goal, PayoffMode::ParJoin, config);
  std::size_t tags = 0;
  for (const auto &name : state.universe.names_of(payoff))
    tags += name.find("/c") != std::string::npos;
  CHECK(tags == state.beliefs.at(1).geons.at(1).variant_tag.size());
}

TEST_CASE("planning")
{
  Scene scene;
  add_block(scene, 1, 11.5, 0, Eigen::Vector3d::Ones(), 3);
  auto config = config_at(0, 0, 0);
  auto state = initial_state(scene, config);
  discover(state, geoncog::perception::sense(scene, state.pose, config.sensor, config.catalog), scene, config);
  REQUIRE(state.beliefs.size() == 1);
  auto model = world_model(state, scene);
  std::vector<ObjectId> goal{1};
  auto plan = plan_step(state, model, goal, config);
  REQUIRE(plan.actions.size() == 2);
  CHECK(plan.actions.front() == Action::Forward);
  CHECK(plan.improves);
  auto brute = oracle::brute_plan(state, model, goal, config);
  CHECK(plan.actions == brute.actions);
  CHECK(plan.payoff == brute.payoff);

  auto idle = plan_step(state, model, {}, config);
  CHECK(idle.actions == std::vector<Action>{Action::Stay});
  CHECK_FALSE(idle.improves);
}

TEST_CASE("planner matches exhaustive search")
{
  auto out = props::planner_equivalence(61, 24);
  INFO(out.detail);
  CHECK(out.pass);
}

TEST_CASE("saturation")
{
  ObjectBelief b;
  b.phase = Phase::Approach;
  CHECK_FALSE(check_saturation(b));
  b.phase = Phase::Orbit;
  b.reachable = {0, 1, 2, 3, 4, 5, 6, 7};
  b.cycle = {0, 1, 2, 3};
  CHECK_FALSE(check_saturation(b));
  b.cycle = {0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(check_saturation(b));
  b.reachable = {2, 3, 4};
  b.cycle = {2, 3, 4};
  CHECK(check_saturation(b));
}

TEST_CASE("viewpoints")
{
  Scene scene;
  add_block(scene, 1, 0, 0);
  auto east = octant_viewpoint(scene, 1, 0);
  REQUIRE(east);
  CHECK(*east == AgentPose{2, 0, 4});
  auto north_east = octant_viewpoint(scene, 1, 1);
  REQUIRE(north_east);
  CHECK(*north_east == AgentPose{2, 2, 5});
  CHECK_FALSE(octant_viewpoint(scene, 2, 0));

  Scene edge;
  add_block(edge, 1, 9.5, 0);
  CHECK_FALSE(octant_viewpoint(edge, 1, 0));
  CHECK(octant_viewpoint(edge, 1, 4));

  auto pts = survey_points(scene);
  CHECK(pts[0] == std::pair{5, 5});
  CHECK(pts[2] == std::pair{-5, -5});
}

TEST_CASE("navigation")
{
  Scene scene;
  add_block(scene, 1, 2, 0);
  auto first = navigate(scene, {1, 0, 0}, [](const AgentPose &p) { return p.x == 4 && p.y == 0; });
  REQUIRE(first);
  CHECK(*first != Action::Forward); // straight ahead is blocked
  CHECK(navigate(scene, {0, 0, 0}, [](const AgentPose &p) { return p.x == 0; }) == Action::Stay);
  CHECK_FALSE(navigate(scene, {0, 0, 0}, [](const AgentPose &p) { return p.x == 2 && p.y == 0; }));
}

TEST_CASE("episodes on fixture scenes")
{
  for (auto name : {"one_object.json", "boundary.json"}) {
    auto c = geoncog::scenario::load_config(kFixtures / name);
    auto result = run_episode(c.scene, c.explorer);
    CHECK(result.termination == Termination::NoGoals);
    CHECK(result.trace.size() < c.explorer.max_steps);
    const auto &b = result.final_state.beliefs.at(1);
    CHECK(b.phase == Phase::Saturated);
    CHECK_FALSE(result.deltas.records().at(object_key(1)).schemes.empty());
    if (std::string(name) == "boundary.json")
      CHECK(b.reachable.size() < 8);
    auto again = run_episode(c.scene, c.explorer);
    CHECK(geoncog::scenario::trace_text(again.trace) == geoncog::scenario::trace_text(result.trace));
  }
}

TEST_CASE("empty scene")
{
  Scene scene;
  auto result = run_episode(scene, {});
  CHECK(result.termination == Termination::NoGoals);
  CHECK(result.deltas.empty());
  CHECK(result.final_state.beliefs.empty());
  for (const auto &e : result.trace) {
    CHECK(e.source == "survey");
    CHECK(e.detections.empty());
  }
  CHECK(result.final_state.surveyed.size() == 4);
}

TEST_CASE("step budget")
{
  auto c = geoncog::scenario::load_config(kFixtures / "two_objects.json");
  c.explorer.max_steps = 0;
  auto none = run_episode(c.scene, c.explorer);
  CHECK(none.trace.empty());
  CHECK(none.termination == Termination::MaxSteps);
  c.explorer.max_steps = 5;
  auto few = run_episode(c.scene, c.explorer);
  CHECK(few.trace.size() == 5);
  CHECK(few.termination == Termination::MaxSteps);
}

TEST_CASE("trace lines are canonical")
{
  auto c = geoncog::scenario::load_config(kFixtures / "one_object.json");
  c.explorer.max_steps = 12;
  auto result = run_episode(c.scene, c.explorer);
  for (const auto &e : result.trace) {
    auto line = trace_line(e);
    CHECK(line.back() == '\n');
    CHECK(nlohmann::json::parse(line).dump() + "\n" == line);
  }
}

TEST_CASE("episode claims")
{
  auto out = props::episode_claims({kFixtures / "one_object.json"}, 71, 3);
  INFO(out.detail);
  CHECK(out.pass);
}
