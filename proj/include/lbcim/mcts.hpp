#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lbcim/engine.hpp"
#include "lbcim/heuristics.hpp"
#include "lbcim/strategy.hpp"

namespace lbcim {

enum class RolloutMode : std::uint8_t { Random, EpsGreedy };

// Whether the searching player fires selected nodes or also picks the amount.
enum class AmountMode : std::uint8_t { Fire, ChooseAmount };

TokenPolicy policy_for(AmountMode mode);

struct MctsConfig {
  int iterations = 1000; // 0 means "until time_cap"
  std::optional<std::chrono::milliseconds> time_cap;
  double c = std::sqrt(2.0);
  double epsilon = 0.7;
  RolloutMode rollout = RolloutMode::EpsGreedy;
  AmountMode amount_mode = AmountMode::Fire;
  HeuristicConfig heuristics;

  void validate() const;
};

// One node of the search tree. score_sum is kept from the perspective of the
// player who made `move` (for the root: the searching player), with win 1,
// draw 0.5, loss 0.
struct SearchNode {
  std::optional<Move> move;
  PlayerColor player_to_move = PlayerColor::Red;
  int parent = -1;
  std::int64_t visits = 0;
  double score_sum = 0.0;
  std::vector<int> children;
  std::vector<Move> untried_moves;
  bool terminal = false;

  double mean() const { return visits > 0 ? score_sum / static_cast<double>(visits) : 0.0; }
};

class SearchTree {
public:
  // Root at `state`, searched for `player` (who must be to move). Root moves
  // touching `excluded` nodes are dropped.
  SearchTree(const GameState &state, PlayerColor player, std::span<const NodeId> excluded = {});

  static constexpr int root = 0;

  const SearchNode &node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  SearchNode &node(int i) { return nodes_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return nodes_.size(); }
  PlayerColor root_player() const { return root_player_; }

  // Adds the child for one untried move of `parent`, picked at random.
  // `state` must be the parent's position; it becomes the child's.
  int expand(int parent, GameState &state, Rng &rng);

  // Adds the child for a specific untried move.
  int add_child(int parent, std::size_t untried_index, GameState &state);

private:
  std::vector<SearchNode> nodes_;
  PlayerColor root_player_;
};

// x̄ + c·sqrt(ln(parent_visits) / visits); +infinity for an unvisited child.
double uct(const SearchNode &child, std::int64_t parent_visits, double c);

struct Leaf {
  int index = SearchTree::root;
  GameState state;
};

// Descends through fully expanded nodes by UCT, then expands one untried
// move. Returns a terminal node unchanged.
Leaf traverse(SearchTree &tree, const GameState &root_state, const MctsConfig &cfg, Rng &rng);

// Best candidate with probability epsilon, else one of the others uniformly.
NodeId pick_eps_greedy(std::span<const ScoredNode> scored, double epsilon, Rng &rng);

// One playout move for `player` (who is to move) following its TokenPolicy.
Move rollout_policy(const GameState &state, PlayerColor player, const MctsConfig &cfg, Rng &rng);

// Plays to the end; 1 / 0.5 / 0 from root_player's side.
double rollout(GameState state, PlayerColor root_player, const MctsConfig &cfg, Rng &rng);

double result_for(const GameState &finished, PlayerColor player);

void backpropagate(SearchTree &tree, int leaf, double result);

// Runs the configured iterations and returns the tree.
SearchTree build_tree(const GameState &state, PlayerColor player, const MctsConfig &cfg, Rng &rng,
                      std::span<const NodeId> excluded = {});

// Most visited root child; ties to the lower node id, then the smaller amount.
Move best_child_move(const SearchTree &tree);

// Pass when there is no legal non-pass move.
Move search(const GameState &state, PlayerColor player, const MctsConfig &cfg, Rng &rng,
            std::span<const NodeId> excluded = {});

// General MCTS (random rollouts) or the heuristic eps-greedy variant, as a
// Strategy. Skips the search when only one move is available.
class MctsStrategy final : public Strategy {
public:
  explicit MctsStrategy(MctsConfig cfg = {});
  std::optional<Choice> choose(const GameState &state, PlayerColor player,
                               std::span<const NodeId> excluded, Rng &rng) const override;
  std::string name() const override;
  bool emits_amount() const override { return cfg_.amount_mode == AmountMode::ChooseAmount; }
  const MctsConfig &config() const { return cfg_; }

private:
  MctsConfig cfg_;
};

} // namespace lbcim
