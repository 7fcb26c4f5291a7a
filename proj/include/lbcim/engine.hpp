#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbcim/graph.hpp"
#include "lbcim/random.hpp"
#include "lbcim/strategy.hpp"

namespace lbcim {

enum class PlayerColor : std::uint8_t { Red, Black };

constexpr PlayerColor opponent(PlayerColor c) {
  return c == PlayerColor::Red ? PlayerColor::Black : PlayerColor::Red;
}

constexpr NodeState state_of(PlayerColor c) {
  return c == PlayerColor::Red ? NodeState::Red : NodeState::Black;
}

constexpr std::size_t index_of(PlayerColor c) { return c == PlayerColor::Red ? 0 : 1; }

std::string to_string(PlayerColor c);
PlayerColor parse_color(const std::string &s);

// How many tokens a player puts on the node it selects.
enum class TokenPolicy : std::uint8_t {
  FireCapacity, // exactly the node's capacity, firing it
  OneToken,     // a single token
  ChosenAmount, // strategy-provided amount in [1, capacity]
};

std::string to_string(TokenPolicy p);

struct GameConfig {
  // nullopt: one token per graph node
  std::optional<int> budget_red;
  std::optional<int> budget_black;
  TokenPolicy policy_red = TokenPolicy::FireCapacity;
  TokenPolicy policy_black = TokenPolicy::FireCapacity;
  PlayerColor starter = PlayerColor::Black;
  // nullopt: 10 turns per graph node
  std::optional<int> safety_turn_cap;
  // On each activation theta grows by threshold_growth * degree.
  int threshold_growth = 1;
};

struct Move {
  NodeId node = -1;
  int amount = 0;

  static Move pass() { return {}; }
  static Move donate(NodeId v, int t) { return {v, t}; }
  bool is_pass() const { return node < 0; }

  auto operator<=>(const Move &) const = default;
};

struct Activation {
  NodeId node = -1;
  PlayerColor color = PlayerColor::Red;

  bool operator==(const Activation &) const = default;
};

class IllegalMove : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// The full game position: a per-game copy of the node attributes on top of a
// shared immutable graph, plus budgets and turn bookkeeping.
class GameState {
public:
  GameState(std::shared_ptr<const Graph> graph, const GameConfig &cfg);

  const Graph &graph() const { return *graph_; }
  const std::shared_ptr<const Graph> &graph_ptr() const { return graph_; }
  std::size_t node_count() const { return attrs_.size(); }

  const NodeAttrs &attrs(NodeId v) const { return attrs_[static_cast<std::size_t>(v)]; }
  int budget(PlayerColor c) const { return budget_[index_of(c)]; }
  int initial_budget(PlayerColor c) const { return initial_budget_[index_of(c)]; }
  TokenPolicy policy(PlayerColor c) const { return policy_[index_of(c)]; }
  PlayerColor to_move() const { return to_move_; }
  int consecutive_passes() const { return consecutive_passes_; }
  int turn_index() const { return turn_index_; }
  int turn_cap() const { return turn_cap_; }
  int threshold_growth() const { return growth_; }

  // Both players passed in a row, both budgets are spent, or the safety cap hit.
  bool is_over() const;

  // Position setup for analysis and tests. Does not cascade.
  void set_node(NodeId v, const NodeAttrs &a);
  void set_budget(PlayerColor c, int tokens);
  void set_to_move(PlayerColor c) { to_move_ = c; }

  // Plays one move for the side to move and advances the turn.
  // Returns the activations it caused. Throws IllegalMove.
  std::vector<Activation> apply(const Move &m);
  void apply_quiet(const Move &m);

  // internal mutable access for the diffusion routines
  NodeAttrs &mutable_attrs(NodeId v) { return attrs_[static_cast<std::size_t>(v)]; }
  void spend(PlayerColor c, int tokens) { budget_[index_of(c)] -= tokens; }

private:
  void play(const Move &m, std::vector<Activation> *events);

  std::shared_ptr<const Graph> graph_;
  std::vector<NodeAttrs> attrs_;
  std::array<int, 2> budget_{};
  std::array<int, 2> initial_budget_{};
  std::array<TokenPolicy, 2> policy_{};
  PlayerColor to_move_ = PlayerColor::Black;
  int consecutive_passes_ = 0;
  int turn_index_ = 0;
  int turn_cap_ = 0;
  int growth_ = 1;
};

// theta - (red + black), floored at 0. Throws std::out_of_range.
int capacity(const GameState &state, NodeId v);

// Non-isolated nodes that are inactive or held by the opponent, ascending.
std::vector<NodeId> eligible_nodes(const GameState &state, PlayerColor player);

bool is_eligible(const GameState &state, PlayerColor player, NodeId v);

// Legal moves for `player` under `policy`: one Donate per affordable eligible
// node (per amount for ChosenAmount), or a lone Pass when nothing is
// affordable. Empty once the game is over.
std::vector<Move> legal_moves(const GameState &state, PlayerColor player, TokenPolicy policy);
std::vector<Move> legal_moves(const GameState &state, PlayerColor player);

// Donates t tokens of the player's color to v and runs the resulting cascade.
// Does not touch turn bookkeeping. Throws IllegalMove (state unchanged).
std::vector<Activation> apply_donation(GameState &state, PlayerColor player, NodeId v, int t);

using ActivationQueue = std::vector<Activation>;

// Fires v for `color`: convert opposing tokens, spread own tokens to the
// neighbors, grow theta, and append every node pushed over its threshold to
// the queue. Throws std::logic_error if v is below threshold.
void activate(GameState &state, NodeId v, PlayerColor color, ActivationQueue &queue);

// FIFO over the queue, re-checking the threshold at dequeue. Returns the
// activations in the order they happened.
std::vector<Activation> process_cascade(GameState &state, ActivationQueue queue);

enum class Outcome : std::uint8_t { RedWin, BlackWin, Draw };

std::string to_string(Outcome o);

struct NodeCounts {
  int red = 0;
  int black = 0;
};

NodeCounts count_nodes(const GameState &state);
Outcome winner(const GameState &state);
Outcome winner(NodeCounts counts);

struct TurnRecord {
  int turn_index = 0;
  PlayerColor player = PlayerColor::Red;
  Move move;
  std::vector<Activation> activations;
};

struct GameResult {
  Outcome outcome = Outcome::Draw;
  int red_nodes = 0;
  int black_nodes = 0;
  int turns = 0;
  std::vector<TurnRecord> trace;
};

// Asks the strategy for a node, skipping ineligible and unaffordable picks
// until one works, then plays it per the player's token policy. Plays a Pass
// when the budget is empty or no pick is affordable.
TurnRecord take_turn(GameState &state, PlayerColor player, const Strategy &strategy, Rng &rng);

struct PlayerSeeds {
  std::uint64_t red = 0;
  std::uint64_t black = 0;
};

PlayerSeeds player_seeds(std::uint64_t seed);

GameResult play_game(std::shared_ptr<const Graph> graph, const GameConfig &cfg,
                     const Strategy &strat_red, const Strategy &strat_black, std::uint64_t seed);
GameResult play_game(std::shared_ptr<const Graph> graph, const GameConfig &cfg,
                     const Strategy &strat_red, const Strategy &strat_black, PlayerSeeds seeds);

std::string trace_to_text(const std::vector<TurnRecord> &trace);
std::string trace_to_json(const GameResult &result);

} // namespace lbcim
