// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>

#include "explorer_detail.hpp"
#include "geoncog/explorer.hpp"

namespace geoncog::explorer {

namespace {

// Chebyshev distance at which a survey point counts as covered.
constexpr int kSurveyReach = 2;

double rounded(double v)
{
  return std::round(v * 1e6) / 1e6;
}

ClassId resolved_class(const GeonBelief &g, const geons::Catalog &catalog)
{
  return catalog.at(static_cast<std::size_t>(std::countr_zero(g.current))).id;
}

// Cells reachable from `from` by forward moves in any heading.
std::set<std::pair<int, int>> reachable_cells(const worldgen::Scene &model, const AgentPose &from)
{
  std::set<std::pair<int, int>> seen{{from.x, from.y}};
  std::deque<std::pair<int, int>> queue{{from.x, from.y}};
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (int h = 0; h < perception::kHeadings; ++h) {
      auto next = apply(AgentPose{x, y, h}, Action::Forward);
      if (seen.contains({next.x, next.y}) || !passable(model, next.x, next.y))
        continue;
      seen.insert({next.x, next.y});
      queue.emplace_back(next.x, next.y);
    }
  }
  return seen;
}

geons::GeonScheme scheme_of(const worldgen::Scene &scene, const ObjectBelief &b, std::span<const InstanceId> ids,
    const AgentPose &pose, const geons::Catalog &catalog)
{
  const auto *spec = scene.find(b.id);
  std::vector<geons::GeonInstance> instances;
  std::vector<ClassId> classes;
  for (const auto &g : spec->geons)
    if (std::find(ids.begin(), ids.end(), g.instance_id) != ids.end()) {
      instances.push_back(g);
      classes.push_back(resolved_class(b.geons.at(g.instance_id), catalog));
    }
  return geons::make_scheme(instances, std::move(classes), {double(pose.x), double(pose.y), pose.heading});
}

InsertRecord store(geons::SchemaStore &deltas, ObjectBelief &b, const geons::GeonScheme &scheme)
{
  InsertRecord rec{b.id, geons::scheme_canonical_form(scheme), geons::InsertResult::Duplicate};
  std::vector<std::string> descriptors;
  for (const auto &g : scheme.geons)
    descriptors.push_back(geons::geon_descriptor(g.object, g.instance));
  rec.result = deltas.insert_encoding(object_key(b.id), rec.encoding, descriptors);
  b.schemes_seen.insert(rec.encoding);
  return rec;
}

const char *to_string(geons::InsertResult r)
{
  return r == geons::InsertResult::Added ? "added" : "duplicate";
}

} // namespace

nlohmann::json to_json(const TraceEvent &e)
{
  using nlohmann::json;
  json detections = json::array();
  for (const auto &d : e.detections)
    detections.push_back({{"geon", d.geon}, {"object", d.object}, {"band", perception::to_string(d.band)},
        {"candidates", d.candidates}, {"distance", rounded(d.distance)}});
  json payoffs = json::object();
  for (const auto &[id, code] : e.goal_payoffs)
    payoffs[std::to_string(id)] = code;
  json transitions = json::array();
  for (const auto &[id, from, to] : e.transitions)
    transitions.push_back({{"object", id}, {"from", to_string(from)}, {"to", to_string(to)}});
  json inserts = json::array();
  for (const auto &r : e.inserts)
    inserts.push_back({{"object", r.object}, {"encoding", r.encoding}, {"result", to_string(r.result)}});
  return {{"step", e.step}, {"pose", {{"x", e.pose.x}, {"y", e.pose.y}, {"heading", e.pose.heading}}},
      {"detections", detections}, {"selected_goals", e.selected_goals}, {"capacity", e.capacity},
      {"goal_payoffs", payoffs}, {"play_payoff", e.play_payoff}, {"universe_size", e.universe_size},
      {"action", to_string(e.action)}, {"source", e.source}, {"glance", e.glance}, {"blocked", e.blocked}, {"transitions", transitions},
      {"inserts", inserts}};
}

std::string trace_line(const TraceEvent &e)
{
  return to_json(e).dump() + "\n";
}

EpisodeResult run_episode(const worldgen::Scene &scene, const ExplorerConfig &config, const StepObserver &observer)
{
  validate(config);
  EpisodeResult result;
  auto &state = result.final_state;
  state = initial_state(scene, config);
  result.termination = Termination::MaxSteps;
  std::vector<ObjectId> previous_active;

  for (std::size_t step = 0; step < config.max_steps; ++step) {
    TraceEvent ev;
    ev.step = step;
    ev.pose = state.pose;
    state.step = step;

    std::map<ObjectId, std::size_t> facets_before;
    for (const auto &[id, b] : state.beliefs)
      facets_before[id] = b.cumulative_geons.count();

    auto detections = perception::sense(scene, state.pose, config.sensor, config.catalog);
    ev.transitions = discover(state, detections, scene, config);
    if (state.active_goals().empty()) {
      // Nothing to pursue: look around in place before giving up.
      ev.glance = true;
      std::set<InstanceId> have;
      for (const auto &d : detections)
        have.insert(d.geon);
      std::vector<perception::Detection> extra;
      for (int turn = 1; turn < perception::kHeadings; ++turn) {
        AgentPose look = state.pose;
        look.heading = (state.pose.heading + turn) % perception::kHeadings;
        for (auto &d : perception::sense(scene, look, config.sensor, config.catalog))
          if (have.insert(d.geon).second)
            extra.push_back(std::move(d));
      }
      std::stable_sort(extra.begin(), extra.end(), [](const auto &a, const auto &b) {
        return a.distance != b.distance ? a.distance < b.distance : a.geon < b.geon;
      });
      auto more = discover(state, extra, scene, config);
      ev.transitions.insert(ev.transitions.end(), more.begin(), more.end());
      detections.insert(detections.end(), extra.begin(), extra.end());
    }
    std::map<ObjectId, std::vector<InstanceId>> seen_now;
    for (const auto &d : detections) {
      ev.detections.push_back({d.geon, d.object, d.band, d.candidates, d.distance});
      seen_now[d.object].push_back(d.geon);
    }
    auto model = world_model(state, scene);

    std::optional<std::set<std::pair<int, int>>> cells;
    for (auto &[id, b] : state.beliefs) {
      if (b.phase != Phase::Orbit)
        continue;
      bool gain = b.cumulative_geons.count() > facets_before[id];
      int visited = -1;
      std::array<std::optional<AgentPose>, perception::kHeadings> viewpoints;
      for (int k = 0; k < perception::kHeadings; ++k) {
        viewpoints[k] = octant_viewpoint(model, id, k);
        if (viewpoints[k] && *viewpoints[k] == state.pose) {
          if (seen_now.contains(id))
            visited = k;
          else
            b.blind.insert(*viewpoints[k]);
        }
      }
      if (visited >= 0 && b.all_resolved()) {
        auto rec = store(result.deltas, b, scheme_of(scene, b, seen_now.at(id), state.pose, config.catalog));
        gain = gain || rec.result == geons::InsertResult::Added;
        ev.inserts.push_back(std::move(rec));
      }
      if (gain)
        b.cycle.clear();
      if (visited >= 0)
        b.cycle.insert(visited);

      if (!cells)
        cells = reachable_cells(model, state.pose);
      b.reachable.clear();
      for (int k = 0; k < perception::kHeadings; ++k) {
        const auto &vp = viewpoints[k];
        if (vp && !b.blind.contains(*vp) && cells->contains({vp->x, vp->y}))
          b.reachable.insert(k);
      }

      if (check_saturation(b)) {
        b.phase = Phase::Saturated;
        ev.transitions.emplace_back(id, Phase::Orbit, Phase::Saturated);
        std::vector<InstanceId> all;
        for (const auto &[gid, g] : b.geons)
          all.push_back(gid);
        ev.inserts.push_back(store(result.deltas, b, scheme_of(scene, b, all, state.pose, config.catalog)));
      }
    }

    auto active = state.active_goals();
    if (active != previous_active) {
      state.capacity = config.capacity_k;
      previous_active = active;
    }

    if (active.empty()) {
      // Nothing left to pursue here: walk to the survey points not yet
      // covered, looking around on the way.
      const auto points = survey_points(scene);
      auto near_point = [&](const AgentPose &p, std::size_t i) {
        return std::max(std::abs(p.x - points[i].first), std::abs(p.y - points[i].second)) <= kSurveyReach;
      };
      for (std::size_t i = 0; i < points.size(); ++i)
        if (near_point(state.pose, i))
          state.surveyed.insert(static_cast<int>(i));
      std::optional<Action> move;
      if (state.surveyed.size() < points.size())
        move = navigate(model, state.pose, [&](const AgentPose &p) {
          for (std::size_t i = 0; i < points.size(); ++i)
            if (!state.surveyed.contains(static_cast<int>(i)) && near_point(p, i))
              return true;
          return false;
        });
      if (!move) {
        result.termination = Termination::NoGoals;
        break;
      }
      state.selected_goals.clear();
      ev.source = "survey";
      ev.action = *move;
    } else {
      int l = state.capacity;
      std::vector<ObjectId> selection;
      Plan plan;
      for (;;) {
        selection = select_goals(state, l);
        plan = plan_step(state, model, selection, config);
        if (plan.improves || l == 1)
          break;
        --l;
      }
      state.capacity = l;
      state.selected_goals = selection;
      if (plan.improves) {
        ev.action = plan.actions.front();
        ev.source = "planner";
        ev.play_payoff = lattice::encode(plan.payoff);
      } else {
        ev.source = "navigate";
        auto &target = state.beliefs.at(selection.front());
        std::optional<Action> move;
        if (target.phase == Phase::Approach) {
          auto wanted = [&](const AgentPose &p) {
            for (const auto &d : perception::sense(model, p, config.sensor, config.catalog))
              if (d.object == target.id && d.band == perception::Band::Near && !target.geons.at(d.geon).resolved())
                return true;
            return false;
          };
          move = navigate(model, state.pose, wanted);
          if (!move || *move == Action::Stay)
            target.stalled = true;
        } else {
          std::vector<AgentPose> goals;
          for (auto k : target.reachable)
            if (!target.cycle.contains(k))
              if (auto vp = octant_viewpoint(model, target.id, k))
                goals.push_back(*vp);
          move = navigate(model, state.pose,
              [&](const AgentPose &p) { return std::find(goals.begin(), goals.end(), p) != goals.end(); });
        }
        ev.action = move.value_or(Action::Stay);
      }
    }

    ev.selected_goals = state.selected_goals;
    ev.capacity = state.capacity;
    for (auto id : state.selected_goals)
      ev.goal_payoffs[id] = lattice::encode(object_payoff(state.beliefs.at(id), state.universe));
    ev.universe_size = state.universe.size();

    if (ev.action == Action::Forward && !legal(scene, state.pose, Action::Forward))
      ev.blocked = true;
    else
      state.pose = apply(state.pose, ev.action);

    if (observer)
      observer(state, ev);
    result.trace.push_back(std::move(ev));
  }
  state.step = result.trace.size();
  return result;
}

} // namespace geoncog::explorer
