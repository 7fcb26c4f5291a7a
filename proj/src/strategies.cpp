#include "lbcim/strategies.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace lbcim {

namespace {

bool is_excluded(std::span<const NodeId> excluded, NodeId v) {
  return std::find(excluded.begin(), excluded.end(), v) != excluded.end();
}

template <class Better>
std::optional<NodeId> threshold_pick(const GameState &state, PlayerColor player,
                                     std::span<const NodeId> excluded, Better better) {
  std::optional<NodeId> best;
  for (NodeId v : eligible_nodes(state, player)) {
    if (is_excluded(excluded, v))
      continue;
    // strict comparison keeps the lower id on ties
    if (!best || better(state.attrs(v).theta, state.attrs(*best).theta))
      best = v;
  }
  return best;
}

} // namespace

std::optional<NodeId> random_pick(const GameState &state, PlayerColor player,
                                  std::span<const NodeId> excluded, Rng &rng) {
  auto nodes = eligible_nodes(state, player);
  std::erase_if(nodes, [&](NodeId v) { return is_excluded(excluded, v); });
  if (nodes.empty())
    return std::nullopt;
  return nodes[uniform_index(rng, nodes.size())];
}

std::optional<NodeId> min_threshold_pick(const GameState &state, PlayerColor player,
                                         std::span<const NodeId> excluded) {
  return threshold_pick(state, player, excluded, std::less<int>{});
}

std::optional<NodeId> max_threshold_pick(const GameState &state, PlayerColor player,
                                         std::span<const NodeId> excluded) {
  return threshold_pick(state, player, excluded, std::greater<int>{});
}

namespace {

std::optional<Choice> as_choice(std::optional<NodeId> v) {
  if (!v)
    return std::nullopt;
  return Choice{*v, std::nullopt};
}

} // namespace

std::optional<Choice> RandomStrategy::choose(const GameState &state, PlayerColor player,
                                             std::span<const NodeId> excluded, Rng &rng) const {
  return as_choice(random_pick(state, player, excluded, rng));
}

std::optional<Choice> MinThresholdStrategy::choose(const GameState &state, PlayerColor player,
                                                   std::span<const NodeId> excluded, Rng &) const {
  return as_choice(min_threshold_pick(state, player, excluded));
}

std::optional<Choice> MaxThresholdStrategy::choose(const GameState &state, PlayerColor player,
                                                   std::span<const NodeId> excluded, Rng &) const {
  return as_choice(max_threshold_pick(state, player, excluded));
}

double minimax_evaluate(const GameState &state, PlayerColor player, const MinimaxConfig &cfg) {
  const auto counts = count_nodes(state);
  const int own = player == PlayerColor::Red ? counts.red : counts.black;
  const int theirs = player == PlayerColor::Red ? counts.black : counts.red;
  double parity = 0.0;
  int considered = 0;
  for (NodeId v = 0; static_cast<std::size_t>(v) < state.node_count(); ++v) {
    if (!state.graph().eligible(v))
      continue;
    parity += ph(state, v, player) / state.attrs(v).theta;
    ++considered;
  }
  if (considered > 0)
    parity /= considered;
  return (own - theirs) + cfg.parity_weight * parity;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Root values closer than this count as a tie; the parity term sums
// fractions in different orders, so true ties can differ by rounding.
constexpr double kTie = 1e-9;

struct AlphaBeta {
  PlayerColor root;
  const MinimaxConfig &cfg;
  std::size_t nodes = 0;

  double search(const GameState &state, int depth, double alpha, double beta) {
    ++nodes;
    if (depth == 0 || state.is_over())
      return minimax_evaluate(state, root, cfg);
    const PlayerColor mover = state.to_move();
    const bool maximizing = mover == root;
    double best = maximizing ? -kInf : kInf;
    for (const Move &m : legal_moves(state, mover, TokenPolicy::FireCapacity)) {
      GameState child = state;
      child.apply_quiet(m);
      const double v = search(child, depth - 1, alpha, beta);
      if (maximizing) {
        best = std::max(best, v);
        alpha = std::max(alpha, best);
      } else {
        best = std::min(best, v);
        beta = std::min(beta, best);
      }
      if (alpha >= beta)
        break;
    }
    return best;
  }
};

} // namespace

MinimaxResult minimax_ab(const GameState &state, PlayerColor player, const MinimaxConfig &cfg,
                         std::span<const NodeId> excluded) {
  if (cfg.depth < 1)
    throw std::invalid_argument("minimax depth must be >= 1");
  MinimaxResult result;
  if (state.is_over() || state.to_move() != player)
    return result;
  AlphaBeta ab{player, cfg};
  double alpha = -kInf;
  for (const Move &m : legal_moves(state, player, TokenPolicy::FireCapacity)) {
    if (m.is_pass() || is_excluded(excluded, m.node))
      continue;
    GameState child = state;
    child.apply_quiet(m);
    const double v = ab.search(child, cfg.depth - 1, alpha, kInf);
    if (!result.move || v > result.value + kTie) {
      result.move = m;
      result.value = v;
      alpha = std::max(alpha, v);
    }
  }
  result.nodes_searched = ab.nodes;
  return result;
}

MinimaxStrategy::MinimaxStrategy(MinimaxConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.depth < 1)
    throw std::invalid_argument("minimax depth must be >= 1");
}

std::optional<Choice> MinimaxStrategy::choose(const GameState &state, PlayerColor player,
                                              std::span<const NodeId> excluded, Rng &) const {
  const auto r = minimax_ab(state, player, cfg_, excluded);
  if (!r.move)
    return std::nullopt;
  return Choice{r.move->node, std::nullopt};
}

} // namespace lbcim
