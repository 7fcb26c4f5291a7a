#include "lbcim/mcts.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace lbcim {

TokenPolicy policy_for(AmountMode mode) {
  return mode == AmountMode::ChooseAmount ? TokenPolicy::ChosenAmount : TokenPolicy::FireCapacity;
}

void MctsConfig::validate() const {
  if (iterations < 0 || (iterations == 0 && !time_cap))
    throw std::invalid_argument("mcts: need iterations >= 1 or a time cap");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("mcts: epsilon must lie in [0, 1]");
  if (c < 0.0)
    throw std::invalid_argument("mcts: exploration constant must be non-negative");
  heuristics.weights.validate();
}

SearchTree::SearchTree(const GameState &state, PlayerColor player, std::span<const NodeId> excluded)
    : root_player_(player) {
  if (!state.is_over() && state.to_move() != player)
    throw std::invalid_argument("search root must be the searching player's turn");
  SearchNode root;
  root.player_to_move = state.to_move();
  root.terminal = state.is_over();
  if (!root.terminal) {
    root.untried_moves = legal_moves(state, player);
    std::erase_if(root.untried_moves, [&](const Move &m) {
      return !m.is_pass() && std::find(excluded.begin(), excluded.end(), m.node) != excluded.end();
    });
    if (root.untried_moves.empty())
      root.untried_moves.push_back(Move::pass());
  }
  nodes_.push_back(std::move(root));
}

int SearchTree::add_child(int parent, std::size_t untried_index, GameState &state) {
  auto &untried = node(parent).untried_moves;
  const Move m = untried[untried_index];
  untried[untried_index] = untried.back();
  untried.pop_back();

  state.apply_quiet(m);
  SearchNode child;
  child.move = m;
  child.parent = parent;
  child.player_to_move = state.to_move();
  child.terminal = state.is_over();
  if (!child.terminal)
    child.untried_moves = legal_moves(state, child.player_to_move);
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(child));
  node(parent).children.push_back(index);
  return index;
}

int SearchTree::expand(int parent, GameState &state, Rng &rng) {
  const auto n = node(parent).untried_moves.size();
  if (n == 0)
    throw std::logic_error("expand: node is fully expanded");
  return add_child(parent, uniform_index(rng, n), state);
}

double uct(const SearchNode &child, std::int64_t parent_visits, double c) {
  if (child.visits == 0)
    return std::numeric_limits<double>::infinity();
  const double n_i = static_cast<double>(child.visits);
  return child.score_sum / n_i + c * std::sqrt(std::log(static_cast<double>(parent_visits)) / n_i);
}

Leaf traverse(SearchTree &tree, const GameState &root_state, const MctsConfig &cfg, Rng &rng) {
  Leaf leaf{SearchTree::root, root_state};
  for (;;) {
    const SearchNode &node = tree.node(leaf.index);
    if (node.terminal)
      return leaf;
    if (!node.untried_moves.empty()) {
      leaf.index = tree.expand(leaf.index, leaf.state, rng);
      return leaf;
    }
    int best = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int child : node.children) {
      const double v = uct(tree.node(child), node.visits, cfg.c);
      if (best < 0 || v > best_value) {
        best = child;
        best_value = v;
      }
    }
    if (best < 0)
      return leaf;
    leaf.state.apply_quiet(*tree.node(best).move);
    leaf.index = best;
  }
}

NodeId pick_eps_greedy(std::span<const ScoredNode> scored, double epsilon, Rng &rng) {
  if (scored.empty())
    throw std::invalid_argument("pick_eps_greedy: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scored.size(); ++i)
    if (scored[i].final > scored[best].final ||
        (scored[i].final == scored[best].final && scored[i].node < scored[best].node))
      best = i;
  if (scored.size() == 1 || bernoulli(rng, epsilon))
    return scored[best].node;
  std::size_t other = uniform_index(rng, scored.size() - 1);
  if (other >= best)
    ++other;
  return scored[other].node;
}

Move rollout_policy(const GameState &state, PlayerColor player, const MctsConfig &cfg, Rng &rng) {
  const int budget = state.budget(player);
  if (budget == 0)
    return Move::pass();
  const TokenPolicy policy = state.policy(player);
  auto candidates = eligible_nodes(state, player);
  if (policy == TokenPolicy::FireCapacity)
    std::erase_if(candidates, [&](NodeId v) { return capacity(state, v) > budget; });
  if (candidates.empty())
    return Move::pass();

  NodeId v = candidates.front();
  if (candidates.size() > 1) {
    if (cfg.rollout == RolloutMode::Random) {
      v = candidates[uniform_index(rng, candidates.size())];
    } else {
      const auto scored = score_candidates(state, candidates, player, cfg.heuristics);
      v = pick_eps_greedy(scored, cfg.epsilon, rng);
    }
  }
  const int cap = capacity(state, v);
  switch (policy) {
  case TokenPolicy::OneToken:
    return Move::donate(v, 1);
  case TokenPolicy::ChosenAmount:
    return Move::donate(v, uniform_int(rng, 1, std::min(cap, budget)));
  case TokenPolicy::FireCapacity:
    break;
  }
  return Move::donate(v, cap);
}

double result_for(const GameState &finished, PlayerColor player) {
  const Outcome o = winner(finished);
  if (o == Outcome::Draw)
    return 0.5;
  return (o == Outcome::RedWin) == (player == PlayerColor::Red) ? 1.0 : 0.0;
}

double rollout(GameState state, PlayerColor root_player, const MctsConfig &cfg, Rng &rng) {
  while (!state.is_over())
    state.apply_quiet(rollout_policy(state, state.to_move(), cfg, rng));
  return result_for(state, root_player);
}

void backpropagate(SearchTree &tree, int leaf, double result) {
  const PlayerColor root_player = tree.root_player();
  for (int i = leaf; i >= 0; i = tree.node(i).parent) {
    SearchNode &node = tree.node(i);
    ++node.visits;
    if (node.parent < 0) {
      node.score_sum += result;
    } else {
      const PlayerColor mover = tree.node(node.parent).player_to_move;
      node.score_sum += mover == root_player ? result : 1.0 - result;
    }
  }
}

SearchTree build_tree(const GameState &state, PlayerColor player, const MctsConfig &cfg, Rng &rng,
                      std::span<const NodeId> excluded) {
  cfg.validate();
  SearchTree tree(state, player, excluded);
  using clock = std::chrono::steady_clock;
  const auto deadline = cfg.time_cap ? clock::now() + *cfg.time_cap : clock::time_point::max();
  for (int done = 0; cfg.iterations == 0 || done < cfg.iterations; ++done) {
    if (cfg.time_cap && clock::now() >= deadline)
      break;
    Leaf leaf = traverse(tree, state, cfg, rng);
    const double result = rollout(std::move(leaf.state), player, cfg, rng);
    backpropagate(tree, leaf.index, result);
  }
  return tree;
}

Move best_child_move(const SearchTree &tree) {
  const SearchNode &root = tree.node(SearchTree::root);
  const SearchNode *best = nullptr;
  for (int i : root.children) {
    const SearchNode &c = tree.node(i);
    if (!best || c.visits > best->visits ||
        (c.visits == best->visits &&
         std::tie(c.move->node, c.move->amount) < std::tie(best->move->node, best->move->amount)))
      best = &c;
  }
  if (!best)
    return root.untried_moves.empty() ? Move::pass() : root.untried_moves.front();
  return *best->move;
}

Move search(const GameState &state, PlayerColor player, const MctsConfig &cfg, Rng &rng,
            std::span<const NodeId> excluded) {
  if (state.is_over())
    return Move::pass();
  return best_child_move(build_tree(state, player, cfg, rng, excluded));
}

MctsStrategy::MctsStrategy(MctsConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

std::string MctsStrategy::name() const {
  return cfg_.rollout == RolloutMode::EpsGreedy ? "eps-mcts" : "mcts";
}

std::optional<Choice> MctsStrategy::choose(const GameState &state, PlayerColor player,
                                           std::span<const NodeId> excluded, Rng &rng) const {
  if (state.is_over())
    return std::nullopt;
  SearchTree probe(state, player, excluded);
  const auto &moves = probe.node(SearchTree::root).untried_moves;
  Move m = moves.front();
  if (moves.size() > 1)
    m = search(state, player, cfg_, rng, excluded);
  if (m.is_pass())
    return std::nullopt;
  Choice choice{m.node, std::nullopt};
  if (emits_amount())
    choice.amount = m.amount;
  return choice;
}

} // namespace lbcim
