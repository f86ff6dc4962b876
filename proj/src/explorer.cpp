// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoncog/explorer.hpp"

#include "explorer_detail.hpp"

#include <algorithm>
#include <cmath>

namespace geoncog::explorer {

const char *to_string(ErrorKind kind)
{
  switch (kind) {
  case ErrorKind::NoGoals:
    return "NoGoals";
  case ErrorKind::EmptySelection:
    return "EmptySelection";
  case ErrorKind::NoLegalAction:
    return "NoLegalAction";
  case ErrorKind::InvalidConfig:
    return "InvalidConfig";
  }
  return "Unknown";
}

const char *to_string(Action a)
{
  switch (a) {
  case Action::Forward:
    return "forward";
  case Action::TurnLeft:
    return "turn_left";
  case Action::TurnRight:
    return "turn_right";
  case Action::Stay:
    return "stay";
  }
  return "?";
}

AgentPose apply(const AgentPose &pose, Action a)
{
  static constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
  static constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  AgentPose out = pose;
  switch (a) {
  case Action::Forward:
    out.x += kDx[pose.heading];
    out.y += kDy[pose.heading];
    break;
  case Action::TurnLeft:
    out.heading = (pose.heading + 1) % perception::kHeadings;
    break;
  case Action::TurnRight:
    out.heading = (pose.heading + perception::kHeadings - 1) % perception::kHeadings;
    break;
  case Action::Stay:
    break;
  }
  return out;
}

const char *to_string(PayoffMode m)
{
  return m == PayoffMode::ParJoin ? "par_join" : "implication_meet";
}

PayoffMode payoff_mode_from_string(const std::string &s)
{
  if (s == "par_join")
    return PayoffMode::ParJoin;
  if (s == "implication_meet")
    return PayoffMode::ImplicationMeet;
  throw ExplorerError(ErrorKind::InvalidConfig, "payoff_mode must be par_join or implication_meet");
}

const char *to_string(Phase p)
{
  switch (p) {
  case Phase::Approach:
    return "approach";
  case Phase::Orbit:
    return "orbit";
  case Phase::Saturated:
    return "saturated";
  }
  return "?";
}

std::string object_key(ObjectId id)
{
  return "object-" + std::to_string(id);
}

// Universe ////////////////////////////////////////////////////////////////////

std::optional<std::size_t> Universe::find(const std::string &name) const
{
  auto it = index_.find(name);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

std::size_t Universe::add(const std::string &name)
{
  auto [it, fresh] = index_.emplace(name, names_.size());
  if (fresh)
    names_.push_back(name);
  return it->second;
}

std::vector<std::string> Universe::names_of(const Set &s) const
{
  std::vector<std::string> out;
  for (auto i = s.find_first(); i != Set::npos; i = s.find_next(i))
    out.push_back(names_.at(i));
  return out;
}

// Beliefs /////////////////////////////////////////////////////////////////////

namespace detail {

std::size_t catalog_index(const geons::Catalog &catalog, ClassId id)
{
  for (std::size_t i = 0; i < catalog.size(); ++i)
    if (catalog[i].id == id)
      return i;
  throw geons::GeonError(geons::ErrorKind::UnknownClass, "class " + std::to_string(id) + " not in catalog");
}

ClassMask mask_of(const std::vector<ClassId> &classes, const geons::Catalog &catalog)
{
  ClassMask m = 0;
  for (auto c : classes)
    m |= ClassMask{1} << catalog_index(catalog, c);
  return m;
}

void fit(Set &s, std::size_t n)
{
  if (s.size() != n)
    s.resize(n);
}

void fit(ObjectBelief &b, std::size_t n)
{
  fit(b.block, n);
  fit(b.cumulative_geons, n);
}

void absorb(ObjectBelief &b, const perception::Detection &d, const geons::Catalog &catalog)
{
  auto &g = b.geons.at(d.geon);
  g.current &= mask_of(d.candidates, catalog);
  for (std::size_t k = 0; k < geons::kFacets.size(); ++k)
    if (d.visible_facets & geons::zone(geons::kFacets[k]))
      b.cumulative_geons.set(g.facet_base + k);
}

} // namespace detail

using namespace detail;

bool ObjectBelief::all_resolved() const
{
  return std::all_of(geons.begin(), geons.end(), [](const auto &kv) { return kv.second.resolved(); });
}

std::vector<ClassId> ObjectBelief::variant_set(InstanceId geon, const geons::Catalog &catalog) const
{
  std::vector<ClassId> out;
  auto mask = geons.at(geon).current;
  for (std::size_t i = 0; i < catalog.size(); ++i)
    if (mask & (ClassMask{1} << i))
      out.push_back(catalog[i].id);
  std::sort(out.begin(), out.end());
  return out;
}

Set GoalLattice::subset(std::span<const ObjectId> ids) const
{
  Set s = lattice.bottom();
  for (auto id : ids) {
    auto it = std::lower_bound(goals.begin(), goals.end(), id);
    if (it != goals.end() && *it == id)
      s.set(static_cast<std::size_t>(it - goals.begin()) + 1);
  }
  return s;
}

double GoalLattice::valuation(const Set &s) const
{
  double v = 0.0;
  for (std::size_t i = 0; i < goals.size(); ++i)
    if (s.test(i + 1))
      v += attention[i];
  return v;
}

void validate(const ExplorerConfig &c)
{
  auto fail = [](const std::string &msg) { throw ExplorerError(ErrorKind::InvalidConfig, msg); };
  if (!(c.sensor.fov_degrees > 0.0 && c.sensor.fov_degrees <= 360.0))
    fail("fov_degrees must lie in (0, 360]");
  if (!(c.sensor.horizon_m > 0.0))
    fail("horizon_m must be positive");
  if (c.capacity_k < 1)
    fail("capacity_k must be at least 1");
  if (c.horizon_steps < 1 || c.horizon_steps > 5)
    fail("horizon_steps must lie in [1, 5]");
  for (const auto &[id, s] : c.salience)
    if (!(s >= 0.0))
      fail("salience of object " + std::to_string(id) + " must be non-negative");
  geons::validate_catalog(c.catalog);
}

std::vector<ObjectId> ExplorationState::active_goals() const
{
  std::vector<ObjectId> out;
  for (const auto &[id, b] : beliefs)
    if (b.phase != Phase::Saturated && !b.stalled)
      out.push_back(id);
  return out;
}

ExplorationState initial_state(const worldgen::Scene &scene, const ExplorerConfig &config)
{
  ExplorationState s;
  s.capacity = config.capacity_k;
  if (config.start) {
    s.pose = *config.start;
  } else {
    // Passable cell nearest the middle of the bounds, scanning outwards.
    auto mid = scene.bounds.center();
    const int cx = static_cast<int>(std::lround(mid.x()));
    const int cy = static_cast<int>(std::lround(mid.y()));
    s.pose = {cx, cy, 0};
    bool found = passable(scene, cx, cy);
    for (int r = 1; !found && r < 64; ++r)
      for (int dy = -r; dy <= r && !found; ++dy)
        for (int dx = -r; dx <= r && !found; ++dx)
          if (std::max(std::abs(dx), std::abs(dy)) == r && passable(scene, cx + dx, cy + dy)) {
            s.pose = {cx + dx, cy + dy, 0};
            found = true;
          }
  }
  if (!perception::inside(scene, s.pose))
    throw perception::PerceptionError(perception::ErrorKind::PoseOutOfBounds, "start pose outside the scene");
  return s;
}

std::vector<std::tuple<ObjectId, Phase, Phase>> discover(ExplorationState &state,
    std::span<const perception::Detection> detections, const worldgen::Scene &scene, const ExplorerConfig &config)
{
  std::vector<std::tuple<ObjectId, Phase, Phase>> transitions;
  if (detections.empty())
    return transitions;

  std::map<ObjectId, double> nearest;
  for (const auto &d : detections) {
    auto [it, fresh] = nearest.emplace(d.object, d.distance);
    if (!fresh)
      it->second = std::min(it->second, d.distance);
  }

  bool new_goals = false;
  std::vector<std::pair<ObjectId, std::size_t>> registered; // object, first new index
  for (const auto &d : detections) {
    auto it = state.beliefs.find(d.object);
    if (it == state.beliefs.end()) {
      ObjectBelief b;
      b.id = d.object;
      auto override_it = config.salience.find(d.object);
      const auto *spec = scene.find(d.object);
      double salience = override_it != config.salience.end() ? override_it->second : spec ? spec->salience : 0.0;
      b.attention = salience + 1.0 / (1.0 + nearest.at(d.object));
      it = state.beliefs.emplace(d.object, std::move(b)).first;
      new_goals = true;
    }
    auto &belief = it->second;
    if (belief.geons.contains(d.geon))
      continue;
    GeonBelief g;
    const auto prefix = geons::geon_descriptor(d.object, d.geon);
    const auto first = state.universe.size();
    g.facet_base = state.universe.size();
    for (auto f : geons::kFacets)
      state.universe.add(prefix + "/" + geons::to_string(f));
    for (auto c : d.candidates)
      g.variant_tag[catalog_index(config.catalog, c)] = state.universe.add(prefix + "/c" + std::to_string(c));
    g.initial = g.current = mask_of(d.candidates, config.catalog);
    belief.geons.emplace(d.geon, std::move(g));
    registered.emplace_back(d.object, first);
  }

  const auto n = state.universe.size();
  for (auto &[id, b] : state.beliefs)
    fit(b, n);
  for (std::size_t r = 0; r < registered.size(); ++r) {
    auto end = r + 1 < registered.size() ? registered[r + 1].second : n;
    for (auto i = registered[r].second; i < end; ++i)
      state.beliefs.at(registered[r].first).block.set(i);
  }

  std::set<ObjectId> touched;
  for (const auto &d : detections) {
    absorb(state.beliefs.at(d.object), d, config.catalog);
    touched.insert(d.object);
  }
  for (auto id : touched) {
    auto &b = state.beliefs.at(id);
    if (b.phase == Phase::Approach && b.all_resolved()) {
      b.phase = Phase::Orbit;
      b.cycle.clear();
      transitions.emplace_back(id, Phase::Approach, Phase::Orbit);
    }
  }

  if (new_goals) {
    auto &gl = state.goal_lattice;
    gl.goals.clear();
    gl.attention.clear();
    for (const auto &[id, b] : state.beliefs) {
      gl.goals.push_back(id);
      gl.attention.push_back(b.attention);
    }
    gl.lattice = lattice::BitsetLattice(gl.goals.size() + 1);
  }
  return transitions;
}

std::vector<ObjectId> select_goals(const ExplorationState &state, int capacity)
{
  if (capacity < 1)
    throw ExplorerError(ErrorKind::InvalidConfig, "capacity must be at least 1");
  auto active = state.active_goals();
  if (active.empty())
    throw ExplorerError(ErrorKind::NoGoals, "no unsaturated goal");
  std::stable_sort(active.begin(), active.end(), [&](ObjectId a, ObjectId b) {
    return state.beliefs.at(a).attention > state.beliefs.at(b).attention;
  });
  active.resize(std::min(active.size(), static_cast<std::size_t>(capacity)));
  std::sort(active.begin(), active.end());
  return active;
}

Set free_move_payoff(const ExplorationState &state, std::span<const ObjectId> goals)
{
  lattice::BitsetLattice l(state.universe.size());
  Set claimed = l.bottom();
  for (auto id : goals)
    claimed = l.join(claimed, l.adopt(state.beliefs.at(id).block));
  return claimed.flip();
}

Set object_payoff(const ObjectBelief &belief, const Universe &universe)
{
  Set out(universe.size());
  const bool approach = belief.phase == Phase::Approach;
  for (const auto &[id, g] : belief.geons)
    for (const auto &[bit, tag] : g.variant_tag)
      if (!approach || !(g.current & (ClassMask{1} << bit)))
        out.set(tag);
  if (approach)
    return out;
  Set facets = belief.cumulative_geons;
  fit(facets, universe.size());
  return out | facets;
}

} // namespace geoncog::explorer
