// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoncog/lattice.hpp"
#include "json.hpp"

namespace geoncog::games {

enum class ErrorKind
{
  InvalidGame,
  LatticeMismatch,
  NotBrouwer,
  ForeignMoves,
  InvalidStrategy,
  MiddleGameMismatch,
  ModeMismatch,
  Divergence,
  ParseError,
};

const char *to_string(ErrorKind kind);

class GameError : public std::runtime_error
{
 public:
  GameError(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Opponent is the environment, Proponent the system.
enum class Polarity : std::int8_t
{
  Opponent = -1,
  Proponent = 1,
};

constexpr Polarity flip(Polarity p)
{
  return p == Polarity::Opponent ? Polarity::Proponent : Polarity::Opponent;
}

struct Move
{
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  Polarity polarity = Polarity::Opponent;

  friend bool operator==(const Move &, const Move &) = default;
};

/// Rooted, finite, acyclic move graph.
class ConwayGame
{
 public:
  ConwayGame(std::vector<std::string> positions, std::uint32_t root, std::vector<Move> moves);

  const std::vector<std::string> &positions() const { return positions_; }
  std::size_t size() const { return positions_.size(); }
  std::uint32_t root() const { return root_; }
  const std::vector<Move> &moves() const { return moves_; }
  const Move &move(std::uint32_t m) const { return moves_.at(m); }

  /// Move indices leaving `position`, ascending.
  std::span<const std::uint32_t> out_moves(std::uint32_t position) const;
  /// Rank of move `m` within out_moves(move(m).from).
  std::uint32_t out_rank(std::uint32_t m) const { return out_rank_.at(m); }

  std::uint32_t position_index(const std::string &name) const;

  friend bool operator==(const ConwayGame &a, const ConwayGame &b)
  {
    return a.positions_ == b.positions_ && a.root_ == b.root_ && a.moves_ == b.moves_;
  }

 private:
  std::vector<std::string> positions_;
  std::uint32_t root_;
  std::vector<Move> moves_;
  std::vector<std::uint32_t> out_offsets_;
  std::vector<std::uint32_t> out_list_;
  std::vector<std::uint32_t> out_rank_;
};

/// How a compound game combines component payoffs at a product position.
enum class Combiner
{
  Meet,           // k_X ∧ k_Y
  Join,           // k_X ∨ k_Y
  Residual,       // k_X ⇒ k_Y
  ComplementJoin, // ¬k_X ∨ k_Y
  ComplementMeet, // ¬k_X ∧ k_Y
};

const char *to_string(Combiner c);

enum class TensorPayoff
{
  Meet,
  Join,
};
enum class ParPayoff
{
  ComplementJoin,
  ComplementMeet,
};
enum class ImplicationPayoff
{
  Residual,
  ComplementJoin,
  ComplementMeet,
};

class PayoffGame;

enum class Side : std::uint8_t
{
  Left,
  Right,
};

struct MoveOrigin
{
  Side side;
  std::uint32_t component_move;
};

enum class CompositeKind
{
  Tensor,
  Par,
  Implication,
};

/// Provenance of a product game. For X ⊸ Y, `left` is X itself (the graph's
/// left factor is its dual).
struct Composite
{
  CompositeKind kind;
  Combiner combiner;
  std::shared_ptr<const PayoffGame> left;
  std::shared_ptr<const PayoffGame> right;
  std::vector<MoveOrigin> origins;        // per product move
  std::vector<std::uint32_t> first_move;  // per product position

  std::uint32_t position(std::uint32_t left_pos, std::uint32_t right_pos) const;
  /// Product move from (left_pos, right_pos) that replays a component move.
  std::uint32_t product_move(std::uint32_t left_pos, std::uint32_t right_pos, Side side,
      std::uint32_t component_move) const;
};

class PayoffGame
{
 public:
  PayoffGame(ConwayGame game, std::shared_ptr<const lattice::FiniteLattice> lattice,
      std::vector<lattice::Element> payoff);

  const ConwayGame &game() const { return game_; }
  const lattice::FiniteLattice &lattice() const { return *lattice_; }
  const std::shared_ptr<const lattice::FiniteLattice> &lattice_ptr() const { return lattice_; }
  lattice::Element payoff(std::uint32_t position) const { return payoff_.at(position); }
  const std::vector<lattice::Element> &payoffs() const { return payoff_; }

  /// Null for games not built by tensor/par/implication_game.
  const Composite *composite() const { return composite_.get(); }

  /// Structural equality (graph, lattice instance, payoff values).
  friend bool operator==(const PayoffGame &a, const PayoffGame &b);

 private:
  friend std::shared_ptr<const PayoffGame> product(const std::shared_ptr<const PayoffGame> &,
      const std::shared_ptr<const PayoffGame> &, bool, CompositeKind, Combiner);

  ConwayGame game_;
  std::shared_ptr<const lattice::FiniteLattice> lattice_;
  std::vector<lattice::Element> payoff_;
  std::shared_ptr<const Composite> composite_;
};

using GamePtr = std::shared_ptr<const PayoffGame>;

/// Sequence of move indices from the root.
using Play = std::vector<std::uint32_t>;

GamePtr make_game(ConwayGame game, std::shared_ptr<const lattice::FiniteLattice> lattice,
    std::vector<lattice::Element> payoff);

/// Same graph with every polarity reversed; payoffs carried unchanged.
GamePtr dual(const GamePtr &g);
GamePtr tensor(const GamePtr &x, const GamePtr &y, TensorPayoff mode);
GamePtr par(const GamePtr &x, const GamePtr &y, ParPayoff mode);
/// X ⊸ Z, built on the graph of X^⊥ ⅋ Z.
GamePtr implication_game(const GamePtr &x, const GamePtr &z, ImplicationPayoff mode);

/// All paths from the root with at most `max_length` moves, lexicographic by
/// move index (a play precedes its extensions).
std::vector<Play> enumerate_plays(const ConwayGame &g, std::size_t max_length, bool alternating_only);
inline std::vector<Play> enumerate_plays(const PayoffGame &g, std::size_t max_length, bool alternating_only)
{
  return enumerate_plays(g.game(), max_length, alternating_only);
}

/// End position of a play (root for the empty play). Assumes a valid path.
std::uint32_t end_position(const ConwayGame &g, const Play &p);

/// Set of even-length alternating plays starting with an Opponent move.
class Strategy
{
 public:
  Strategy() = default;
  explicit Strategy(std::set<Play> plays) : plays_(std::move(plays)) {}

  const std::set<Play> &plays() const { return plays_; }
  void insert(Play p) { plays_.insert(std::move(p)); }
  bool contains(const Play &p) const { return plays_.contains(p); }
  std::size_t size() const { return plays_.size(); }

  /// The move answering odd-length `s·m`, if any play of the strategy has it
  /// as prefix.
  std::optional<std::uint32_t> response(const Play &odd_prefix) const;

  /// Plays with no proper extension inside the strategy.
  std::vector<Play> maximal_plays() const;

  friend bool operator==(const Strategy &, const Strategy &) = default;

 private:
  std::set<Play> plays_;
};

/// Non-empty, even/alternating/Opponent-first, even-prefix closed, deterministic.
/// Throws ForeignMoves when a play names a move the game does not have.
bool validate_strategy(const PayoffGame &g, const Strategy &s);

/// Every maximal play ends at a position of payoff ≠ bottom.
/// Throws InvalidStrategy when validate_strategy fails.
bool is_winning(const PayoffGame &g, const Strategy &s);

/// Positional side conditions under which winning strategies on X ⊸ Y
/// compose, checked at the end of every play of `s`:
///   Residual, ComplementJoin: k_Y(y) ≠ 0
///   ComplementMeet:           ¬k_X(x) ≠ 0 and k_Y(y) ≠ 0
/// `g` must come from implication_game.
bool meets_composition_conditions(const PayoffGame &g, const Strategy &s);

struct Composition
{
  GamePtr game;
  Strategy strategy;
};

/// Interaction-and-hiding composition of sigma on X ⊸ Y with rho on Y ⊸ Z.
Composition compose(const GamePtr &xy, const Strategy &sigma, const GamePtr &yz, const Strategy &rho);

/// Copycat strategy on X ⊸ X.
Composition copycat(const GamePtr &x, ImplicationPayoff mode = ImplicationPayoff::Residual);

/// Game description: {"vertices": [...], "root": name, "moves": [{"from", "to",
/// "polarity": "O"|"P"}], "payoff": {vertex: element}}. Missing payoffs default
/// to the lattice top.
GamePtr game_from_json(const nlohmann::json &doc, std::shared_ptr<const lattice::FiniteLattice> lattice);

} // namespace geoncog::games
