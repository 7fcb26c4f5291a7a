#pragma once

// Fuzz generators and independent oracles shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "lbcim/engine.hpp"
#include "lbcim/strategies.hpp"

namespace lbcim::testing {

inline std::shared_ptr<const Graph> board(std::size_t n, std::vector<Edge> edges) {
  return std::make_shared<const Graph>(new_gameboard(n, edges));
}

inline std::shared_ptr<const Graph> path3() { return board(3, {{0, 1}, {1, 2}}); }

// Random simple graph on [min_n, max_n] nodes, each pair joined with probability p.
inline std::shared_ptr<const Graph> fuzz_graph(Rng &rng, int min_n, int max_n, double p) {
  const int n = uniform_int(rng, min_n, max_n);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (bernoulli(rng, p))
        edges.emplace_back(u, v);
  return board(static_cast<std::size_t>(n), edges);
}

inline TokenPolicy fuzz_policy(Rng &rng) {
  return static_cast<TokenPolicy>(uniform_index(rng, 3));
}

// Uniform legal move for the side to move under its own policy.
inline Move random_legal_move(const GameState &s, Rng &rng) {
  const auto moves = legal_moves(s, s.to_move());
  return moves[uniform_index(rng, moves.size())];
}

// A reachable position: a fresh game with random budgets and policies,
// advanced by `plies` random legal moves (fewer if it ends first).
inline GameState fuzz_position(const std::shared_ptr<const Graph> &g, Rng &rng, int max_budget,
                               int plies) {
  GameConfig cfg;
  cfg.budget_red = uniform_int(rng, 0, max_budget);
  cfg.budget_black = uniform_int(rng, 0, max_budget);
  cfg.policy_red = fuzz_policy(rng);
  cfg.policy_black = fuzz_policy(rng);
  cfg.starter = bernoulli(rng, 0.5) ? PlayerColor::Black : PlayerColor::Red;
  GameState s(g, cfg);
  for (int i = 0; i < plies && !s.is_over(); ++i)
    s.apply_quiet(random_legal_move(s, rng));
  return s;
}

// Returns an empty string when the position satisfies the engine
// invariants, otherwise a description of the first violation.
inline std::string invariant_violation(const GameState &s) {
  long tokens = s.budget(PlayerColor::Red) + s.budget(PlayerColor::Black);
  for (NodeId v = 0; static_cast<std::size_t>(v) < s.node_count(); ++v) {
    const auto &a = s.attrs(v);
    if (a.red_tokens < 0 || a.black_tokens < 0)
      return "negative tokens on node " + std::to_string(v);
    tokens += a.total_tokens();
    if (s.graph().degree(v) > 0 && a.total_tokens() >= a.theta)
      return "node " + std::to_string(v) + " left at or over threshold";
  }
  const long initial = s.initial_budget(PlayerColor::Red) + s.initial_budget(PlayerColor::Black);
  if (tokens != initial)
    return "token total " + std::to_string(tokens) + " != " + std::to_string(initial);
  return {};
}

inline std::string theta_decrease(const GameState &before, const GameState &after) {
  for (NodeId v = 0; static_cast<std::size_t>(v) < before.node_count(); ++v)
    if (after.attrs(v).theta < before.attrs(v).theta)
      return "theta dropped on node " + std::to_string(v);
  return {};
}

// Brute-force diffusion written directly from the model description, on
// plain arrays and without any engine code: donate, then fire nodes from a
// FIFO queue until nothing is over its threshold.
class CascadeOracle {
public:
  explicit CascadeOracle(const GameState &s) : growth_(s.threshold_growth()) {
    const auto n = s.node_count();
    adj_.resize(n);
    for (NodeId v = 0; static_cast<std::size_t>(v) < n; ++v) {
      for (NodeId u : s.graph().neighbors(v))
        adj_[static_cast<std::size_t>(v)].push_back(u);
      std::sort(adj_[static_cast<std::size_t>(v)].begin(), adj_[static_cast<std::size_t>(v)].end());
      const auto &a = s.attrs(v);
      theta_.push_back(a.theta);
      tok_[0].push_back(a.red_tokens);
      tok_[1].push_back(a.black_tokens);
      color_.push_back(a.state == NodeState::Inactive ? -1 : a.state == NodeState::Red ? 0 : 1);
    }
  }

  // c: 0 red, 1 black. Returns (node, color) in firing order.
  std::vector<std::pair<int, int>> donate(int v, int c, int t) {
    std::vector<std::pair<int, int>> fired;
    tok_[c][v] += t;
    std::deque<std::pair<int, int>> q;
    if (total(v) >= theta_[v])
      q.emplace_back(v, c);
    while (!q.empty()) {
      auto [u, col] = q.front();
      q.pop_front();
      if (total(u) < theta_[u])
        continue;
      color_[u] = col;
      tok_[col][u] += tok_[1 - col][u];
      tok_[1 - col][u] = 0;
      const int deg = static_cast<int>(adj_[u].size());

      auto give = [&](int w) {
        const bool was_below = total(w) < theta_[w];
        tok_[col][w] += 1;
        tok_[col][u] -= 1;
        if (was_below && total(w) >= theta_[w])
          q.emplace_back(w, col);
      };
      if (theta_[u] == deg) {
        for (int w : adj_[u])
          give(w);
      } else {
        // selection order: highest threshold first, lower id on ties
        std::vector<int> order, left = adj_[u];
        while (!left.empty()) {
          std::size_t pick = 0;
          for (std::size_t i = 1; i < left.size(); ++i)
            if (theta_[left[i]] > theta_[left[pick]])
              pick = i;
          order.push_back(left[pick]);
          left.erase(left.begin() + static_cast<long>(pick));
        }
        std::size_t i = 0;
        while (tok_[col][u] > 0) {
          give(order[i]);
          i = (i + 1) % order.size();
        }
      }
      theta_[u] += growth_ * deg;
      if (total(u) >= theta_[u])
        q.emplace_back(u, col);
      fired.emplace_back(u, col);
    }
    return fired;
  }

  bool matches(const GameState &s) const {
    for (NodeId v = 0; static_cast<std::size_t>(v) < s.node_count(); ++v) {
      const auto &a = s.attrs(v);
      const int col = a.state == NodeState::Inactive ? -1 : a.state == NodeState::Red ? 0 : 1;
      if (a.theta != theta_[v] || a.red_tokens != tok_[0][v] || a.black_tokens != tok_[1][v] ||
          col != color_[v])
        return false;
    }
    return true;
  }

private:
  int total(int v) const { return tok_[0][v] + tok_[1][v]; }

  int growth_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> theta_;
  std::vector<int> tok_[2];
  std::vector<int> color_;
};

// Unpruned depth-limited minimax over firing moves, same leaf evaluation.
inline double plain_minimax(const GameState &s, PlayerColor root, const MinimaxConfig &cfg,
                            int depth) {
  if (depth == 0 || s.is_over())
    return minimax_evaluate(s, root, cfg);
  const bool maximizing = s.to_move() == root;
  double best = maximizing ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
  for (const Move &m : legal_moves(s, s.to_move(), TokenPolicy::FireCapacity)) {
    GameState child = s;
    child.apply_quiet(m);
    const double v = plain_minimax(child, root, cfg, depth - 1);
    best = maximizing ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

// Best root value over non-pass firing moves; nullopt-like NaN when none.
inline double plain_minimax_root(const GameState &s, PlayerColor root, const MinimaxConfig &cfg) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const Move &m : legal_moves(s, root, TokenPolicy::FireCapacity)) {
    if (m.is_pass())
      continue;
    GameState child = s;
    child.apply_quiet(m);
    const double v = plain_minimax(child, root, cfg, cfg.depth - 1);
    if (std::isnan(best) || v > best)
      best = v;
  }
  return best;
}

// x̄ + c·sqrt(ln(parent) / visits), evaluated directly.
inline double uct_oracle(double mean, double parent_visits, double visits, double c) {
  return mean + c * std::sqrt(std::log(parent_visits) / visits);
}

} // namespace lbcim::testing
