#include "lbcim/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lbcim {

void HeuristicWeights::validate() const {
  if (alpha < 0 || beta < 0 || gamma < 0 || lambda < 0)
    throw std::invalid_argument("heuristic weights must be non-negative");
  if (std::abs(alpha + beta + gamma + lambda - 1.0) > 1e-9)
    throw std::invalid_argument("heuristic weights must sum to 1");
}

double ph(const GameState &state, NodeId v, PlayerColor player) {
  const auto &a = state.attrs(v);
  const int diff = a.black_tokens - a.red_tokens;
  return player == PlayerColor::Black ? diff : -diff;
}

double hwn(const Graph &g, NodeId v) {
  double sum = 0.0;
  for (NodeId n : g.neighbors(v))
    sum += 1.0 / g.degree(n);
  return sum;
}

double nlt(const GameState &state, NodeId v, PlayerColor player, double opponent_bonus) {
  const auto &a = state.attrs(v);
  if (a.theta < 1)
    return 0.0;
  const double bonus = a.state == state_of(opponent(player)) ? opponent_bonus : 1.0;
  return bonus / a.theta;
}

double hva(const GameState &state, NodeId v) {
  const int deg = state.graph().degree(v);
  if (deg == 0)
    return 0.0;
  return static_cast<double>(deg) / (capacity(state, v) + 1);
}

namespace {

void normalize(std::vector<ScoredNode> &rows, double ScoredNode::*field) {
  double lo = rows.front().*field;
  double hi = lo;
  for (const auto &r : rows) {
    lo = std::min(lo, r.*field);
    hi = std::max(hi, r.*field);
  }
  const double span = hi - lo;
  for (auto &r : rows)
    r.*field = span > 0.0 ? (r.*field - lo) / span : 0.5;
}

} // namespace

std::vector<ScoredNode> score_candidates(const GameState &state, std::span<const NodeId> candidates,
                                         PlayerColor player, const HeuristicConfig &cfg) {
  if (candidates.empty())
    throw std::invalid_argument("final_metric: empty candidate set");
  std::vector<ScoredNode> raw;
  raw.reserve(candidates.size());
  for (NodeId v : candidates)
    raw.push_back({v, ph(state, v, player), hwn(state.graph(), v),
                   nlt(state, v, player, cfg.opponent_bonus), hva(state, v), 0.0});

  auto norm = raw;
  normalize(norm, &ScoredNode::ph);
  normalize(norm, &ScoredNode::hwn);
  normalize(norm, &ScoredNode::nlt);
  normalize(norm, &ScoredNode::hva);
  const auto &w = cfg.weights;
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i].final = w.alpha * norm[i].ph + w.beta * norm[i].hwn + w.gamma * norm[i].nlt +
                   w.lambda * norm[i].hva;
  return raw;
}

std::vector<ScoredNode> final_metric(const GameState &state, std::span<const NodeId> candidates,
                                     PlayerColor player, const HeuristicConfig &cfg) {
  auto rows = score_candidates(state, candidates, player, cfg);
  std::sort(rows.begin(), rows.end(), [](const ScoredNode &a, const ScoredNode &b) {
    if (a.final != b.final)
      return a.final > b.final;
    return a.node < b.node;
  });
  return rows;
}

} // namespace lbcim
