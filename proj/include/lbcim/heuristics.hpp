#pragma once

#include <span>
#include <vector>

#include "lbcim/engine.hpp"

namespace lbcim {

struct HeuristicWeights {
  double alpha = 0.25; // parity
  double beta = 0.25;  // hubs with weak neighbors
  double gamma = 0.25; // low threshold
  double lambda = 0.25; // hubs on the verge of activation

  // Throws std::invalid_argument unless non-negative and summing to 1.
  void validate() const;
};

struct HeuristicConfig {
  HeuristicWeights weights;
  // NLT multiplier for nodes held by the opponent
  double opponent_bonus = 2.0;
};

struct ScoredNode {
  NodeId node = -1;
  double ph = 0.0;
  double hwn = 0.0;
  double nlt = 0.0;
  double hva = 0.0;
  double final = 0.0;
};

// Parity: player's tokens on v minus the opponent's.
double ph(const GameState &state, NodeId v, PlayerColor player);

// Hubs with weak neighbors: sum of 1/degree over the neighbors of v.
double hwn(const Graph &g, NodeId v);

// Low threshold: 1/theta, scaled by opponent_bonus when v is opponent-held.
double nlt(const GameState &state, NodeId v, PlayerColor player, double opponent_bonus = 2.0);

// Hubs on the verge of activation: degree / (capacity + 1).
double hva(const GameState &state, NodeId v);

// Raw scores for each candidate, min-max normalized per column (a constant
// column maps to 0.5), then combined with the weights. Output is in
// candidate order; final_metric() sorts it.
std::vector<ScoredNode> score_candidates(const GameState &state, std::span<const NodeId> candidates,
                                         PlayerColor player, const HeuristicConfig &cfg = {});

// Scored candidates, best first (ties to the lower id). Throws on an empty set.
std::vector<ScoredNode> final_metric(const GameState &state, std::span<const NodeId> candidates,
                                     PlayerColor player, const HeuristicConfig &cfg = {});

} // namespace lbcim
