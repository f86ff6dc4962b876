// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoncog/games.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace geoncog::games {

const char *to_string(ErrorKind kind)
{
  switch (kind) {
  case ErrorKind::InvalidGame:
    return "InvalidGame";
  case ErrorKind::LatticeMismatch:
    return "LatticeMismatch";
  case ErrorKind::NotBrouwer:
    return "NotBrouwer";
  case ErrorKind::ForeignMoves:
    return "ForeignMoves";
  case ErrorKind::InvalidStrategy:
    return "InvalidStrategy";
  case ErrorKind::MiddleGameMismatch:
    return "MiddleGameMismatch";
  case ErrorKind::ModeMismatch:
    return "ModeMismatch";
  case ErrorKind::Divergence:
    return "Divergence";
  case ErrorKind::ParseError:
    return "ParseError";
  }
  return "Unknown";
}

const char *to_string(Combiner c)
{
  switch (c) {
  case Combiner::Meet:
    return "Meet";
  case Combiner::Join:
    return "Join";
  case Combiner::Residual:
    return "Residual";
  case Combiner::ComplementJoin:
    return "ComplementJoin";
  case Combiner::ComplementMeet:
    return "ComplementMeet";
  }
  return "Unknown";
}

// ConwayGame ////////////////////////////////////////////////////////////////

ConwayGame::ConwayGame(std::vector<std::string> positions, std::uint32_t root, std::vector<Move> moves)
    : positions_(std::move(positions)), root_(root), moves_(std::move(moves))
{
  const auto n = positions_.size();
  if (n == 0)
    throw GameError(ErrorKind::InvalidGame, "game needs at least one position");
  if (root_ >= n)
    throw GameError(ErrorKind::InvalidGame, "root out of range");
  {
    auto sorted = positions_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw GameError(ErrorKind::InvalidGame, "duplicate position name");
  }

  std::vector<std::uint32_t> degree(n, 0);
  for (const auto &m : moves_) {
    if (m.from >= n || m.to >= n)
      throw GameError(ErrorKind::InvalidGame, "move references unknown position");
    ++degree[m.from];
  }
  out_offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v)
    out_offsets_[v + 1] = out_offsets_[v] + degree[v];
  out_list_.resize(moves_.size());
  out_rank_.resize(moves_.size());
  std::vector<std::uint32_t> fill(out_offsets_.begin(), out_offsets_.end() - 1);
  for (std::uint32_t m = 0; m < moves_.size(); ++m) {
    auto from = moves_[m].from;
    out_rank_[m] = fill[from] - out_offsets_[from];
    out_list_[fill[from]++] = m;
  }

  // Reachability and acyclicity (Kahn over the reachable part).
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::uint32_t> stack{root_};
  seen[root_] = 1;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto m : out_moves(v))
      if (!seen[moves_[m].to]) {
        seen[moves_[m].to] = 1;
        stack.push_back(moves_[m].to);
      }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw GameError(ErrorKind::InvalidGame, "position unreachable from root");

  std::vector<std::uint32_t> indegree(n, 0);
  for (const auto &m : moves_)
    ++indegree[m.to];
  std::vector<std::uint32_t> ready;
  for (std::uint32_t v = 0; v < n; ++v)
    if (indegree[v] == 0)
      ready.push_back(v);
  std::size_t removed = 0;
  while (!ready.empty()) {
    auto v = ready.back();
    ready.pop_back();
    ++removed;
    for (auto m : out_moves(v))
      if (--indegree[moves_[m].to] == 0)
        ready.push_back(moves_[m].to);
  }
  if (removed != n)
    throw GameError(ErrorKind::InvalidGame, "move graph has a cycle");
}

std::span<const std::uint32_t> ConwayGame::out_moves(std::uint32_t position) const
{
  return std::span<const std::uint32_t>(out_list_).subspan(
      out_offsets_.at(position), out_offsets_.at(position + 1) - out_offsets_[position]);
}

std::uint32_t ConwayGame::position_index(const std::string &name) const
{
  auto it = std::find(positions_.begin(), positions_.end(), name);
  if (it == positions_.end())
    throw GameError(ErrorKind::InvalidGame, "unknown position '" + name + "'");
  return static_cast<std::uint32_t>(it - positions_.begin());
}

// PayoffGame ////////////////////////////////////////////////////////////////

PayoffGame::PayoffGame(ConwayGame game, std::shared_ptr<const lattice::FiniteLattice> lattice,
    std::vector<lattice::Element> payoff)
    : game_(std::move(game)), lattice_(std::move(lattice)), payoff_(std::move(payoff))
{
  if (!lattice_)
    throw GameError(ErrorKind::InvalidGame, "payoff game needs a lattice");
  if (payoff_.size() != game_.size())
    throw GameError(ErrorKind::InvalidGame, "payoff must cover every position");
  for (auto e : payoff_)
    if (e.owner() != lattice_->uid())
      throw GameError(ErrorKind::LatticeMismatch, "payoff value from a foreign lattice");
}

bool operator==(const PayoffGame &a, const PayoffGame &b)
{
  return a.game_ == b.game_ && a.lattice_->uid() == b.lattice_->uid() && a.payoff_ == b.payoff_;
}

GamePtr make_game(ConwayGame game, std::shared_ptr<const lattice::FiniteLattice> lattice,
    std::vector<lattice::Element> payoff)
{
  return std::make_shared<const PayoffGame>(std::move(game), std::move(lattice), std::move(payoff));
}

std::uint32_t Composite::position(std::uint32_t left_pos, std::uint32_t right_pos) const
{
  return left_pos * static_cast<std::uint32_t>(right->game().size()) + right_pos;
}

std::uint32_t Composite::product_move(
    std::uint32_t left_pos, std::uint32_t right_pos, Side side, std::uint32_t component_move) const
{
  auto p = position(left_pos, right_pos);
  if (side == Side::Left)
    return first_move[p] + left->game().out_rank(component_move);
  auto left_degree = static_cast<std::uint32_t>(left->game().out_moves(left_pos).size());
  return first_move[p] + left_degree + right->game().out_rank(component_move);
}

namespace {

lattice::Element combine(const lattice::FiniteLattice &lat, Combiner c, lattice::Element a, lattice::Element b)
{
  switch (c) {
  case Combiner::Meet:
    return lat.meet(a, b);
  case Combiner::Join:
    return lat.join(a, b);
  case Combiner::Residual:
    return lat.implication(a, b);
  case Combiner::ComplementJoin:
    return lat.join(lat.pseudo_complement(a), b);
  case Combiner::ComplementMeet:
    return lat.meet(lat.pseudo_complement(a), b);
  }
  return a;
}

ConwayGame dual_graph(const ConwayGame &g)
{
  auto moves = g.moves();
  for (auto &m : moves)
    m.polarity = flip(m.polarity);
  return ConwayGame(g.positions(), g.root(), std::move(moves));
}

} // namespace

std::shared_ptr<const PayoffGame> product(const GamePtr &x, const GamePtr &y, bool dual_left,
    CompositeKind kind, Combiner combiner)
{
  if (x->lattice().uid() != y->lattice().uid())
    throw GameError(ErrorKind::LatticeMismatch, "component games use different lattices");
  const auto &lat = x->lattice();
  if (combiner != Combiner::Meet && combiner != Combiner::Join && !lat.is_distributive())
    throw GameError(ErrorKind::NotBrouwer, "payoff combiner needs a Brouwer lattice");

  const auto &gx = x->game();
  const auto &gy = y->game();
  const auto nx = static_cast<std::uint32_t>(gx.size());
  const auto ny = static_cast<std::uint32_t>(gy.size());

  auto composite = std::make_shared<Composite>();
  composite->kind = kind;
  composite->combiner = combiner;
  composite->left = x;
  composite->right = y;

  std::vector<std::string> names;
  std::vector<lattice::Element> payoff;
  std::vector<Move> moves;
  names.reserve(std::size_t(nx) * ny);
  for (std::uint32_t a = 0; a < nx; ++a) {
    for (std::uint32_t b = 0; b < ny; ++b) {
      names.push_back("(" + gx.positions()[a] + "," + gy.positions()[b] + ")");
      payoff.push_back(combine(lat, combiner, x->payoff(a), y->payoff(b)));
      composite->first_move.push_back(static_cast<std::uint32_t>(moves.size()));
      for (auto m : gx.out_moves(a)) {
        const auto &mv = gx.move(m);
        moves.push_back({a * ny + b, mv.to * ny + b, dual_left ? flip(mv.polarity) : mv.polarity});
        composite->origins.push_back({Side::Left, m});
      }
      for (auto m : gy.out_moves(b)) {
        const auto &mv = gy.move(m);
        moves.push_back({a * ny + b, a * ny + mv.to, mv.polarity});
        composite->origins.push_back({Side::Right, m});
      }
    }
  }

  auto game = std::make_shared<PayoffGame>(
      ConwayGame(std::move(names), gx.root() * ny + gy.root(), std::move(moves)), x->lattice_ptr(),
      std::move(payoff));
  game->composite_ = std::move(composite);
  return game;
}

GamePtr dual(const GamePtr &g)
{
  return make_game(dual_graph(g->game()), g->lattice_ptr(), g->payoffs());
}

GamePtr tensor(const GamePtr &x, const GamePtr &y, TensorPayoff mode)
{
  return product(x, y, false, CompositeKind::Tensor,
      mode == TensorPayoff::Meet ? Combiner::Meet : Combiner::Join);
}

GamePtr par(const GamePtr &x, const GamePtr &y, ParPayoff mode)
{
  return product(x, y, false, CompositeKind::Par,
      mode == ParPayoff::ComplementJoin ? Combiner::ComplementJoin : Combiner::ComplementMeet);
}

GamePtr implication_game(const GamePtr &x, const GamePtr &z, ImplicationPayoff mode)
{
  Combiner c = Combiner::Residual;
  if (mode == ImplicationPayoff::ComplementJoin)
    c = Combiner::ComplementJoin;
  else if (mode == ImplicationPayoff::ComplementMeet)
    c = Combiner::ComplementMeet;
  return product(x, z, true, CompositeKind::Implication, c);
}

// Plays ///////////////////////////////////////////////////////////////////////

std::vector<Play> enumerate_plays(const ConwayGame &g, std::size_t max_length, bool alternating_only)
{
  std::vector<Play> out;
  Play current;
  auto visit = [&](auto &&self, std::uint32_t position) -> void {
    out.push_back(current);
    if (current.size() == max_length)
      return;
    for (auto m : g.out_moves(position)) {
      if (alternating_only && !current.empty()
          && g.move(current.back()).polarity == g.move(m).polarity)
        continue;
      current.push_back(m);
      self(self, g.move(m).to);
      current.pop_back();
    }
  };
  visit(visit, g.root());
  return out;
}

std::uint32_t end_position(const ConwayGame &g, const Play &p)
{
  return p.empty() ? g.root() : g.move(p.back()).to;
}

// Strategies //////////////////////////////////////////////////////////////////

std::optional<std::uint32_t> Strategy::response(const Play &odd_prefix) const
{
  auto it = plays_.lower_bound(odd_prefix);
  if (it == plays_.end() || it->size() <= odd_prefix.size())
    return std::nullopt;
  if (!std::equal(odd_prefix.begin(), odd_prefix.end(), it->begin()))
    return std::nullopt;
  return (*it)[odd_prefix.size()];
}

std::vector<Play> Strategy::maximal_plays() const
{
  std::vector<Play> out;
  for (auto it = plays_.begin(); it != plays_.end(); ++it) {
    auto next = std::next(it);
    bool extended = next != plays_.end() && next->size() > it->size()
        && std::equal(it->begin(), it->end(), next->begin());
    if (!extended)
      out.push_back(*it);
  }
  return out;
}

bool validate_strategy(const PayoffGame &pg, const Strategy &s)
{
  const auto &g = pg.game();
  for (const auto &p : s.plays())
    for (auto m : p)
      if (m >= g.moves().size())
        throw GameError(ErrorKind::ForeignMoves, "strategy play names move " + std::to_string(m));

  if (s.plays().empty())
    return false;

  std::map<Play, std::uint32_t> answers;
  for (const auto &p : s.plays()) {
    if (p.size() % 2 != 0)
      return false;
    std::uint32_t position = g.root();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto &mv = g.move(p[i]);
      if (mv.from != position)
        return false;
      auto expected = i % 2 == 0 ? Polarity::Opponent : Polarity::Proponent;
      if (mv.polarity != expected)
        return false;
      position = mv.to;
    }
    for (std::size_t len = 0; len < p.size(); len += 2)
      if (!s.contains(Play(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(len))))
        return false;
    for (std::size_t odd = 1; odd < p.size(); odd += 2) {
      Play prefix(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(odd));
      auto [it, inserted] = answers.emplace(std::move(prefix), p[odd]);
      if (!inserted && it->second != p[odd])
        return false;
    }
  }
  return true;
}

bool is_winning(const PayoffGame &g, const Strategy &s)
{
  if (!validate_strategy(g, s))
    throw GameError(ErrorKind::InvalidStrategy, "is_winning needs a valid strategy");
  const auto bottom = g.lattice().bottom();
  for (const auto &p : s.maximal_plays())
    if (g.payoff(end_position(g.game(), p)) == bottom)
      return false;
  return true;
}

bool meets_composition_conditions(const PayoffGame &g, const Strategy &s)
{
  const auto *c = g.composite();
  if (!c || c->kind != CompositeKind::Implication)
    throw GameError(ErrorKind::InvalidGame, "side conditions apply to implication games");
  const auto &lat = g.lattice();
  const auto ny = static_cast<std::uint32_t>(c->right->game().size());
  for (const auto &p : s.plays()) {
    auto pos = end_position(g.game(), p);
    auto kx = c->left->payoff(pos / ny);
    auto ky = c->right->payoff(pos % ny);
    if (ky == lat.bottom())
      return false;
    if (c->combiner == Combiner::ComplementMeet && lat.pseudo_complement(kx) == lat.bottom())
      return false;
  }
  return true;
}

// Composition /////////////////////////////////////////////////////////////////

namespace {

ImplicationPayoff to_implication_payoff(Combiner c)
{
  switch (c) {
  case Combiner::ComplementJoin:
    return ImplicationPayoff::ComplementJoin;
  case Combiner::ComplementMeet:
    return ImplicationPayoff::ComplementMeet;
  default:
    return ImplicationPayoff::Residual;
  }
}

const Composite &require_implication(const GamePtr &g)
{
  const auto *c = g->composite();
  if (!c || c->kind != CompositeKind::Implication)
    throw GameError(ErrorKind::InvalidGame, "composition needs implication games");
  return *c;
}

} // namespace

Composition compose(const GamePtr &xy, const Strategy &sigma, const GamePtr &yz, const Strategy &rho)
{
  const auto &cxy = require_implication(xy);
  const auto &cyz = require_implication(yz);
  if (!(*cxy.right == *cyz.left))
    throw GameError(ErrorKind::MiddleGameMismatch, "sigma and rho disagree on the middle game");
  if (cxy.combiner != cyz.combiner)
    throw GameError(ErrorKind::ModeMismatch, "sigma and rho use different payoff modes");
  if (!validate_strategy(*xy, sigma) || !validate_strategy(*yz, rho))
    throw GameError(ErrorKind::InvalidStrategy, "composition needs valid strategies");

  auto xz = implication_game(cxy.left, cyz.right, to_implication_payoff(cxy.combiner));
  const auto &cxz = *xz->composite();
  const auto &gx = cxy.left->game();
  const auto &gy = cxy.right->game();
  const auto &gz = cyz.right->game();
  const std::size_t bound = gx.size() * gy.size() * gz.size();

  struct State
  {
    std::uint32_t x, y, z;
    Play s, t, u;
  };

  Strategy result;

  // A move of one component as seen by sigma (XY) or rho (YZ).
  auto xy_move = [&](const State &st, Side side, std::uint32_t m) {
    return cxy.product_move(st.x, st.y, side, m);
  };
  auto yz_move = [&](const State &st, Side side, std::uint32_t m) {
    return cyz.product_move(st.y, st.z, side, m);
  };

  // After an external Opponent move has been fed to one strategy, run the
  // internal dialogue until a visible Proponent move appears or a strategy has
  // no answer. Returns false on a dead end.
  auto settle = [&](State &st, bool sigma_to_move) -> bool {
    for (std::size_t steps = 0;; ++steps) {
      if (steps > bound)
        throw GameError(ErrorKind::Divergence, "internal dialogue exceeded bound");
      if (sigma_to_move) {
        auto n = sigma.response(st.s);
        if (!n)
          return false;
        st.s.push_back(*n);
        auto origin = cxy.origins[*n];
        if (origin.side == Side::Left) {
          st.u.push_back(cxz.product_move(st.x, st.z, Side::Left, origin.component_move));
          st.x = gx.move(origin.component_move).to;
          return true;
        }
        st.t.push_back(yz_move(st, Side::Left, origin.component_move));
        st.y = gy.move(origin.component_move).to;
        sigma_to_move = false;
      } else {
        auto n = rho.response(st.t);
        if (!n)
          return false;
        st.t.push_back(*n);
        auto origin = cyz.origins[*n];
        if (origin.side == Side::Right) {
          st.u.push_back(cxz.product_move(st.x, st.z, Side::Right, origin.component_move));
          st.z = gz.move(origin.component_move).to;
          return true;
        }
        st.s.push_back(xy_move(st, Side::Right, origin.component_move));
        st.y = gy.move(origin.component_move).to;
        sigma_to_move = true;
      }
    }
  };

  auto explore = [&](auto &&self, const State &st) -> void {
    result.insert(st.u);
    auto here = cxz.position(st.x, st.z);
    for (auto m : xz->game().out_moves(here)) {
      if (xz->game().move(m).polarity != games::Polarity::Opponent)
        continue;
      State next = st;
      auto origin = cxz.origins[m];
      next.u.push_back(m);
      bool ok;
      if (origin.side == Side::Left) {
        next.s.push_back(xy_move(next, Side::Left, origin.component_move));
        next.x = gx.move(origin.component_move).to;
        ok = settle(next, true);
      } else {
        next.t.push_back(yz_move(next, Side::Right, origin.component_move));
        next.z = gz.move(origin.component_move).to;
        ok = settle(next, false);
      }
      if (ok)
        self(self, next);
    }
  };

  explore(explore, State{gx.root(), gy.root(), gz.root(), {}, {}, {}});
  return {xz, std::move(result)};
}

Composition copycat(const GamePtr &x, ImplicationPayoff mode)
{
  auto xx = implication_game(x, x, mode);
  const auto &c = *xx->composite();
  const auto &g = x->game();
  Strategy result;
  Play play;
  auto visit = [&](auto &&self, std::uint32_t pos) -> void {
    result.insert(play);
    for (auto m : g.out_moves(pos)) {
      // The Opponent opens on the side where m is an Opponent move of X ⊸ X.
      bool left_first = g.move(m).polarity == Polarity::Proponent;
      auto o = c.product_move(pos, pos, left_first ? Side::Left : Side::Right, m);
      auto to = g.move(m).to;
      auto p = left_first ? c.product_move(to, pos, Side::Right, m) : c.product_move(pos, to, Side::Left, m);
      play.push_back(o);
      play.push_back(p);
      self(self, to);
      play.pop_back();
      play.pop_back();
    }
  };
  visit(visit, g.root());
  return {xx, std::move(result)};
}

// Files ///////////////////////////////////////////////////////////////////////

GamePtr game_from_json(const nlohmann::json &doc, std::shared_ptr<const lattice::FiniteLattice> lattice)
{
  try {
    auto vertices = doc.at("vertices").get<std::vector<std::string>>();
    std::unordered_map<std::string, std::uint32_t> index;
    for (std::uint32_t i = 0; i < vertices.size(); ++i)
      index.emplace(vertices[i], i);
    auto lookup = [&](const std::string &name) {
      auto it = index.find(name);
      if (it == index.end())
        throw GameError(ErrorKind::ParseError, "unknown vertex '" + name + "'");
      return it->second;
    };
    std::vector<Move> moves;
    for (const auto &m : doc.at("moves")) {
      const auto &pol = m.at("polarity");
      Polarity p;
      if (pol.is_number())
        p = pol.get<int>() < 0 ? Polarity::Opponent : Polarity::Proponent;
      else if (pol == "O")
        p = Polarity::Opponent;
      else if (pol == "P")
        p = Polarity::Proponent;
      else
        throw GameError(ErrorKind::ParseError, "polarity must be O, P, -1 or 1");
      moves.push_back({lookup(m.at("from")), lookup(m.at("to")), p});
    }
    auto root = lookup(doc.at("root"));
    std::vector<lattice::Element> payoff(vertices.size(), lattice->top());
    if (doc.contains("payoff"))
      for (const auto &[v, e] : doc.at("payoff").items())
        payoff[lookup(v)] = lattice->element(e.get<std::string>());
    return make_game(ConwayGame(std::move(vertices), root, std::move(moves)), std::move(lattice),
        std::move(payoff));
  } catch (const nlohmann::json::exception &e) {
    throw GameError(ErrorKind::ParseError, e.what());
  }
}

} // namespace geoncog::games
