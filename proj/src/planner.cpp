// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "explorer_detail.hpp"
#include "geoncog/games.hpp"
#include "geoncog/explorer.hpp"

namespace geoncog::explorer {

using namespace detail;

namespace {

constexpr double kBodyMargin = 0.25;
constexpr double kViewMargin = 1.5;

using Beliefs = std::map<ObjectId, ObjectBelief>;

Beliefs goal_beliefs(const ExplorationState &state, std::span<const ObjectId> goals)
{
  Beliefs out;
  for (auto id : goals)
    out.emplace(id, state.beliefs.at(id));
  return out;
}

Set combine(const Beliefs &beliefs, std::span<const ObjectId> goals, const Universe &universe, PayoffMode mode)
{
  if (goals.empty())
    throw ExplorerError(ErrorKind::EmptySelection, "payoff needs at least one selected goal");
  lattice::BitsetLattice l(universe.size());
  Set claimed = l.bottom();
  Set any = l.bottom();
  Set all = l.top();
  for (auto id : goals) {
    const auto &b = beliefs.at(id);
    claimed = l.join(claimed, l.adopt(b.block));
    auto reward = object_payoff(b, universe);
    any = l.join(any, reward);
    all = l.meet(all, reward);
  }
  Set free_move = l.pseudo_complement(claimed); // U minus the goals' descriptors
  if (mode == PayoffMode::ParJoin)
    return l.meet(l.pseudo_complement(free_move), any);
  return l.implication(free_move, all);
}

void predict(Beliefs &beliefs, const worldgen::Scene &model, const AgentPose &pose, const ExplorerConfig &config)
{
  for (const auto &d : perception::sense(model, pose, config.sensor, config.catalog)) {
    auto it = beliefs.find(d.object);
    if (it == beliefs.end() || !it->second.geons.contains(d.geon))
      continue;
    absorb(it->second, d, config.catalog);
  }
  for (auto &[id, b] : beliefs)
    if (b.phase == Phase::Approach && b.all_resolved())
      b.phase = Phase::Orbit;
}

bool in_bounds(const worldgen::Scene &scene, int x, int y)
{
  const auto &b = scene.bounds;
  return x >= b.min().x() && x <= b.max().x() && y >= b.min().y() && y <= b.max().y();
}

} // namespace

worldgen::Scene world_model(const ExplorationState &state, const worldgen::Scene &scene)
{
  worldgen::Scene model;
  model.seed = scene.seed;
  model.bounds = scene.bounds;
  for (const auto &[id, belief] : state.beliefs) {
    const auto *spec = scene.find(id);
    if (!spec)
      continue;
    worldgen::ObjectSpec known = *spec;
    known.geons.clear();
    for (const auto &g : spec->geons)
      if (belief.geons.contains(g.instance_id))
        known.geons.push_back(g);
    model.objects.push_back(std::move(known));
  }
  return model;
}

bool passable(const worldgen::Scene &scene, int x, int y)
{
  if (!in_bounds(scene, x, y))
    return false;
  for (const auto &o : scene.objects)
    for (const auto &g : o.geons) {
      auto box = geons::bounding_box(g);
      if (x > box.min().x() - kBodyMargin && x < box.max().x() + kBodyMargin && y > box.min().y() - kBodyMargin
          && y < box.max().y() + kBodyMargin)
        return false;
    }
  return true;
}

bool legal(const worldgen::Scene &scene, const AgentPose &pose, Action a)
{
  if (a != Action::Forward)
    return true;
  auto next = apply(pose, a);
  return passable(scene, next.x, next.y);
}

Set current_payoff(const ExplorationState &state, std::span<const ObjectId> goals, PayoffMode mode)
{
  return combine(goal_beliefs(state, goals), goals, state.universe, mode);
}

Set play_payoff(const ExplorationState &state, const worldgen::Scene &model, std::span<const Action> actions,
    std::span<const ObjectId> goals, PayoffMode mode, const ExplorerConfig &config)
{
  if (goals.empty())
    throw ExplorerError(ErrorKind::EmptySelection, "payoff needs at least one selected goal");
  Beliefs beliefs = goal_beliefs(state, goals);
  AgentPose pose = state.pose;
  Set total(state.universe.size());
  for (auto a : actions) {
    if (legal(model, pose, a))
      pose = apply(pose, a);
    predict(beliefs, model, pose, config);
    total |= combine(beliefs, goals, state.universe, mode);
  }
  return total;
}

namespace {

// Horizon game: Opponent levels deliver the (deterministic) observation,
// Proponent levels choose an action. Each position reached by an action
// carries the payoff accumulated along its path.
class HorizonGame
{
 public:
  HorizonGame(const ExplorationState &state, const worldgen::Scene &model, std::span<const ObjectId> goals,
      const ExplorerConfig &config)
      : state_(state), model_(model), goals_(goals), config_(config)
  {
    add_position(Set(state.universe.size()));
    expand(0, 0, state.pose, goal_beliefs(state, goals));
  }

  games::ConwayGame game() const { return games::ConwayGame(names_, 0, moves_); }
  const Set &accumulated(std::uint32_t position) const { return accumulated_[position]; }
  Action action(std::uint32_t move) const { return actions_[move]; }

 private:
  std::uint32_t add_position(Set acc)
  {
    names_.push_back("v" + std::to_string(names_.size()));
    accumulated_.push_back(std::move(acc));
    return static_cast<std::uint32_t>(names_.size() - 1);
  }

  void add_move(std::uint32_t from, std::uint32_t to, games::Polarity p, Action a)
  {
    moves_.push_back({from, to, p});
    actions_.push_back(a);
  }

  void expand(std::uint32_t node, int depth, const AgentPose &pose, const Beliefs &beliefs)
  {
    if (depth == 2 * config_.horizon_steps)
      return;
    if (depth % 2 == 0) {
      auto child = add_position(accumulated_[node]);
      add_move(node, child, games::Polarity::Opponent, Action::Stay);
      expand(child, depth + 1, pose, beliefs);
      return;
    }
    for (auto a : kActions) {
      if (!legal(model_, pose, a))
        continue;
      auto next = apply(pose, a);
      Beliefs after = beliefs;
      predict(after, model_, next, config_);
      Set acc = accumulated_[node] | combine(after, goals_, state_.universe, config_.payoff_mode);
      auto child = add_position(std::move(acc));
      add_move(node, child, games::Polarity::Proponent, a);
      expand(child, depth + 1, next, after);
    }
  }

  const ExplorationState &state_;
  const worldgen::Scene &model_;
  std::span<const ObjectId> goals_;
  const ExplorerConfig &config_;
  std::vector<std::string> names_;
  std::vector<games::Move> moves_;
  std::vector<Action> actions_;
  std::vector<Set> accumulated_;
};

} // namespace

Plan plan_step(const ExplorationState &state, const worldgen::Scene &model, std::span<const ObjectId> goals,
    const ExplorerConfig &config)
{
  if (goals.empty())
    return Plan{{Action::Stay}, Set(state.universe.size()), false};

  HorizonGame horizon(state, model, goals, config);
  auto game = horizon.game();
  const auto full = static_cast<std::size_t>(2 * config.horizon_steps);

  std::optional<Plan> best;
  std::string best_code;
  for (const auto &play : games::enumerate_plays(game, full, true)) {
    if (play.size() != full)
      continue;
    Plan candidate;
    for (std::size_t i = 1; i < play.size(); i += 2)
      candidate.actions.push_back(horizon.action(play[i]));
    candidate.payoff = horizon.accumulated(games::end_position(game, play));
    auto code = lattice::encode(candidate.payoff);
    bool better = !best;
    if (best) {
      auto c = candidate.payoff.count();
      auto b = best->payoff.count();
      better = c != b ? c > b : code != best_code ? code < best_code : candidate.actions < best->actions;
    }
    if (better) {
      best = std::move(candidate);
      best_code = std::move(code);
    }
  }
  if (!best)
    throw ExplorerError(ErrorKind::NoLegalAction, "horizon game has no full-length play");
  best->improves = best->payoff.count() > current_payoff(state, goals, config.payoff_mode).count();
  return *best;
}

std::optional<AgentPose> octant_viewpoint(const worldgen::Scene &model, ObjectId object, int octant)
{
  const auto *spec = model.find(object);
  if (!spec || spec->geons.empty())
    return std::nullopt;
  auto box = worldgen::aggregate_box(*spec);
  const double angle = octant * std::numbers::pi / 4.0;
  const int ox = static_cast<int>(std::lround(std::cos(angle)));
  const int oy = static_cast<int>(std::lround(std::sin(angle)));
  auto place = [](int side, double lo, double hi) {
    if (side > 0)
      return static_cast<int>(std::ceil(hi + kViewMargin));
    if (side < 0)
      return static_cast<int>(std::floor(lo - kViewMargin));
    return static_cast<int>(std::lround(0.5 * (lo + hi)));
  };
  AgentPose vp;
  vp.x = place(ox, box.min().x(), box.max().x());
  vp.y = place(oy, box.min().y(), box.max().y());
  if (!in_bounds(model, vp.x, vp.y))
    return std::nullopt;
  auto center = box.center();
  double facing = std::atan2(center.y() - vp.y, center.x() - vp.x);
  vp.heading = static_cast<int>(((std::lround(facing / (std::numbers::pi / 4.0)) % 8) + 8) % 8);
  return vp;
}

std::array<std::pair<int, int>, 4> survey_points(const worldgen::Scene &scene)
{
  const auto &lo = scene.bounds.min();
  const auto &hi = scene.bounds.max();
  auto at = [&](double fx, double fy) {
    return std::pair{static_cast<int>(std::lround(lo.x() + fx * (hi.x() - lo.x()))),
        static_cast<int>(std::lround(lo.y() + fy * (hi.y() - lo.y())))};
  };
  return {at(0.75, 0.75), at(0.25, 0.75), at(0.25, 0.25), at(0.75, 0.25)};
}

bool check_saturation(const ObjectBelief &belief)
{
  if (belief.phase == Phase::Saturated)
    return true;
  if (belief.phase != Phase::Orbit)
    return false;
  return std::includes(belief.cycle.begin(), belief.cycle.end(), belief.reachable.begin(), belief.reachable.end());
}

std::optional<Action> navigate(const worldgen::Scene &model, const AgentPose &from,
    const std::function<bool(const AgentPose &)> &goal)
{
  if (goal(from))
    return Action::Stay;
  const int x0 = static_cast<int>(std::ceil(model.bounds.min().x()));
  const int y0 = static_cast<int>(std::ceil(model.bounds.min().y()));
  const int nx = static_cast<int>(std::floor(model.bounds.max().x())) - x0 + 1;
  const int ny = static_cast<int>(std::floor(model.bounds.max().y())) - y0 + 1;
  if (nx <= 0 || ny <= 0)
    return std::nullopt;

  std::vector<std::int8_t> free(static_cast<std::size_t>(nx * ny), -1);
  auto cell_free = [&](int x, int y) {
    if (x < x0 || y < y0 || x >= x0 + nx || y >= y0 + ny)
      return false;
    auto &f = free[static_cast<std::size_t>((y - y0) * nx + (x - x0))];
    if (f < 0)
      f = passable(model, x, y) ? 1 : 0;
    return f == 1;
  };
  auto index = [&](const AgentPose &p) {
    return static_cast<std::size_t>(((p.y - y0) * nx + (p.x - x0)) * perception::kHeadings + p.heading);
  };
  if (from.x < x0 || from.y < y0 || from.x >= x0 + nx || from.y >= y0 + ny)
    return std::nullopt;

  std::vector<std::int8_t> first(static_cast<std::size_t>(nx * ny * perception::kHeadings), -1);
  std::deque<AgentPose> queue;
  first[index(from)] = static_cast<std::int8_t>(Action::Stay);
  queue.push_back(from);
  while (!queue.empty()) {
    auto pose = queue.front();
    queue.pop_front();
    for (auto a : {Action::Forward, Action::TurnLeft, Action::TurnRight}) {
      auto next = apply(pose, a);
      if (a == Action::Forward && !cell_free(next.x, next.y))
        continue;
      auto &seen = first[index(next)];
      if (seen >= 0)
        continue;
      auto origin = pose == from ? a : static_cast<Action>(first[index(pose)]);
      seen = static_cast<std::int8_t>(origin);
      if (goal(next))
        return origin;
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

} // namespace geoncog::explorer
