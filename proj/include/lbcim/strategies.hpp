#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "lbcim/engine.hpp"
#include "lbcim/heuristics.hpp"
#include "lbcim/strategy.hpp"

namespace lbcim {

// Uniform over eligible nodes not in `excluded`.
std::optional<NodeId> random_pick(const GameState &state, PlayerColor player,
                                  std::span<const NodeId> excluded, Rng &rng);

// argmin / argmax of theta over eligible nodes not in `excluded`, ties to the lower id.
std::optional<NodeId> min_threshold_pick(const GameState &state, PlayerColor player,
                                         std::span<const NodeId> excluded);
std::optional<NodeId> max_threshold_pick(const GameState &state, PlayerColor player,
                                         std::span<const NodeId> excluded);

class RandomStrategy final : public Strategy {
public:
  std::optional<Choice> choose(const GameState &state, PlayerColor player,
                               std::span<const NodeId> excluded, Rng &rng) const override;
  std::string name() const override { return "random"; }
};

class MinThresholdStrategy final : public Strategy {
public:
  std::optional<Choice> choose(const GameState &state, PlayerColor player,
                               std::span<const NodeId> excluded, Rng &rng) const override;
  std::string name() const override { return "min-threshold"; }
};

class MaxThresholdStrategy final : public Strategy {
public:
  std::optional<Choice> choose(const GameState &state, PlayerColor player,
                               std::span<const NodeId> excluded, Rng &rng) const override;
  std::string name() const override { return "max-threshold"; }
};

struct MinimaxConfig {
  int depth = 4; // plies
  // weight of the token-parity tie-breaker added to the node-count margin
  double parity_weight = 0.01;
};

// Leaf value from `player`'s side: own minus opponent node count, plus
// parity_weight times the mean over non-isolated nodes of
// (own tokens - opponent tokens) / theta. That mean lies in (-1, 1), so
// the node-count margin always dominates.
double minimax_evaluate(const GameState &state, PlayerColor player, const MinimaxConfig &cfg);

struct MinimaxResult {
  std::optional<Move> move; // nullopt when no affordable node exists
  double value = 0.0;
  std::size_t nodes_searched = 0;
};

// Depth-limited alpha-beta over firing moves for both sides (each move fires
// one affordable eligible node; a side with none passes). Root ties go to the
// lower node id.
MinimaxResult minimax_ab(const GameState &state, PlayerColor player, const MinimaxConfig &cfg,
                         std::span<const NodeId> excluded = {});

class MinimaxStrategy final : public Strategy {
public:
  explicit MinimaxStrategy(MinimaxConfig cfg = {});
  std::optional<Choice> choose(const GameState &state, PlayerColor player,
                               std::span<const NodeId> excluded, Rng &rng) const override;
  std::string name() const override { return "minimax"; }

private:
  MinimaxConfig cfg_;
};

} // namespace lbcim
