#include "lbcim/engine.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace lbcim {

std::string to_string(PlayerColor c) { return c == PlayerColor::Red ? "red" : "black"; }

PlayerColor parse_color(const std::string &s) {
  if (s == "red")
    return PlayerColor::Red;
  if (s == "black")
    return PlayerColor::Black;
  throw std::invalid_argument("unknown color '" + s + "'");
}

std::string to_string(TokenPolicy p) {
  switch (p) {
  case TokenPolicy::FireCapacity:
    return "fire";
  case TokenPolicy::OneToken:
    return "one";
  case TokenPolicy::ChosenAmount:
    return "choose";
  }
  return "?";
}

std::string to_string(Outcome o) {
  switch (o) {
  case Outcome::RedWin:
    return "red";
  case Outcome::BlackWin:
    return "black";
  case Outcome::Draw:
    return "draw";
  }
  return "?";
}

GameState::GameState(std::shared_ptr<const Graph> graph, const GameConfig &cfg)
    : graph_(std::move(graph)) {
  if (!graph_)
    throw std::invalid_argument("GameState needs a graph");
  attrs_ = graph_->initial_attrs();
  const int n = static_cast<int>(graph_->node_count());
  budget_ = {cfg.budget_red.value_or(n), cfg.budget_black.value_or(n)};
  if (budget_[0] < 0 || budget_[1] < 0)
    throw std::invalid_argument("budgets must be non-negative");
  initial_budget_ = budget_;
  policy_ = {cfg.policy_red, cfg.policy_black};
  to_move_ = cfg.starter;
  turn_cap_ = cfg.safety_turn_cap.value_or(std::max(1, 10 * n));
  if (turn_cap_ < 1)
    throw std::invalid_argument("safety_turn_cap must be >= 1");
  growth_ = cfg.threshold_growth;
  if (growth_ < 0)
    throw std::invalid_argument("threshold_growth must be >= 0");
}

bool GameState::is_over() const {
  return consecutive_passes_ >= 2 || (budget_[0] == 0 && budget_[1] == 0) ||
         turn_index_ >= turn_cap_;
}

void GameState::set_node(NodeId v, const NodeAttrs &a) {
  if (!graph_->contains(v))
    throw std::out_of_range("unknown node " + std::to_string(v));
  attrs_[static_cast<std::size_t>(v)] = a;
}

void GameState::set_budget(PlayerColor c, int tokens) {
  if (tokens < 0)
    throw std::invalid_argument("budget must be non-negative");
  budget_[index_of(c)] = tokens;
}

void GameState::play(const Move &m, std::vector<Activation> *events) {
  if (is_over())
    throw IllegalMove("game is over");
  if (m.is_pass()) {
    ++consecutive_passes_;
  } else {
    auto acts = apply_donation(*this, to_move_, m.node, m.amount);
    if (events)
      *events = std::move(acts);
    consecutive_passes_ = 0;
  }
  to_move_ = opponent(to_move_);
  ++turn_index_;
}

std::vector<Activation> GameState::apply(const Move &m) {
  std::vector<Activation> events;
  play(m, &events);
  return events;
}

void GameState::apply_quiet(const Move &m) { play(m, nullptr); }

int capacity(const GameState &state, NodeId v) {
  if (!state.graph().contains(v))
    throw std::out_of_range("unknown node " + std::to_string(v));
  const auto &a = state.attrs(v);
  return std::max(0, a.theta - a.total_tokens());
}

bool is_eligible(const GameState &state, PlayerColor player, NodeId v) {
  if (!state.graph().contains(v) || !state.graph().eligible(v))
    return false;
  const auto s = state.attrs(v).state;
  return s == NodeState::Inactive || s == state_of(opponent(player));
}

std::vector<NodeId> eligible_nodes(const GameState &state, PlayerColor player) {
  std::vector<NodeId> out;
  out.reserve(state.node_count());
  const auto theirs = state_of(opponent(player));
  for (NodeId v = 0; static_cast<std::size_t>(v) < state.node_count(); ++v) {
    const auto s = state.attrs(v).state;
    if ((s == NodeState::Inactive || s == theirs) && state.graph().eligible(v))
      out.push_back(v);
  }
  return out;
}

std::vector<Move> legal_moves(const GameState &state, PlayerColor player, TokenPolicy policy) {
  std::vector<Move> moves;
  if (state.is_over())
    return moves;
  const int budget = state.budget(player);
  if (budget > 0) {
    for (NodeId v : eligible_nodes(state, player)) {
      const int cap = capacity(state, v);
      switch (policy) {
      case TokenPolicy::FireCapacity:
        if (cap <= budget)
          moves.push_back(Move::donate(v, cap));
        break;
      case TokenPolicy::OneToken:
        moves.push_back(Move::donate(v, 1));
        break;
      case TokenPolicy::ChosenAmount:
        for (int t = 1; t <= std::min(cap, budget); ++t)
          moves.push_back(Move::donate(v, t));
        break;
      }
    }
  }
  if (moves.empty())
    moves.push_back(Move::pass());
  return moves;
}

std::vector<Move> legal_moves(const GameState &state, PlayerColor player) {
  return legal_moves(state, player, state.policy(player));
}

namespace {

int &own_tokens(NodeAttrs &a, PlayerColor c) {
  return c == PlayerColor::Red ? a.red_tokens : a.black_tokens;
}

bool over_threshold(const GameState &state, NodeId v) {
  const auto &a = state.attrs(v);
  return state.graph().degree(v) > 0 && a.total_tokens() >= a.theta;
}

} // namespace

void activate(GameState &state, NodeId v, PlayerColor color, ActivationQueue &queue) {
  if (!over_threshold(state, v))
    throw std::logic_error("activate called below threshold on node " + std::to_string(v));
  const auto &g = state.graph();
  auto &a = state.mutable_attrs(v);
  a.state = state_of(color);
  int &own = own_tokens(a, color);
  int &opp = own_tokens(a, opponent(color));
  own += opp;
  opp = 0;

  const auto nb = g.neighbors(v);
  const int deg = static_cast<int>(nb.size());
  auto give = [&](NodeId n) {
    auto &na = state.mutable_attrs(n);
    const bool below = na.total_tokens() < na.theta;
    ++own_tokens(na, color);
    --own;
    if (below && na.total_tokens() >= na.theta)
      queue.push_back({n, color});
  };

  if (a.theta == deg) {
    for (NodeId n : nb)
      give(n);
  } else {
    std::vector<NodeId> order(nb.begin(), nb.end());
    std::stable_sort(order.begin(), order.end(), [&](NodeId x, NodeId y) {
      return state.attrs(x).theta > state.attrs(y).theta;
    });
    while (own > 0)
      for (NodeId n : order) {
        give(n);
        if (own == 0)
          break;
      }
  }

  a.theta += state.threshold_growth() * deg;
  if (a.total_tokens() >= a.theta)
    queue.push_back({v, color});
}

std::vector<Activation> process_cascade(GameState &state, ActivationQueue queue) {
  std::vector<Activation> events;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Activation next = queue[head];
    if (!over_threshold(state, next.node))
      continue;
    activate(state, next.node, next.color, queue);
    events.push_back(next);
  }
  return events;
}

std::vector<Activation> apply_donation(GameState &state, PlayerColor player, NodeId v, int t) {
  if (!is_eligible(state, player, v))
    throw IllegalMove("node " + std::to_string(v) + " is not eligible for " + to_string(player));
  if (t < 1 || t > capacity(state, v))
    throw IllegalMove("amount " + std::to_string(t) + " outside [1, capacity] for node " +
                      std::to_string(v));
  if (t > state.budget(player))
    throw IllegalMove("amount " + std::to_string(t) + " exceeds the " + to_string(player) +
                      " budget");
  state.spend(player, t);
  auto &a = state.mutable_attrs(v);
  own_tokens(a, player) += t;
  if (a.total_tokens() < a.theta)
    return {};
  return process_cascade(state, {{v, player}});
}

NodeCounts count_nodes(const GameState &state) {
  NodeCounts c;
  for (NodeId v = 0; static_cast<std::size_t>(v) < state.node_count(); ++v) {
    if (!state.graph().eligible(v))
      continue;
    const auto s = state.attrs(v).state;
    c.red += s == NodeState::Red;
    c.black += s == NodeState::Black;
  }
  return c;
}

Outcome winner(NodeCounts counts) {
  if (counts.red > counts.black)
    return Outcome::RedWin;
  if (counts.black > counts.red)
    return Outcome::BlackWin;
  return Outcome::Draw;
}

Outcome winner(const GameState &state) { return winner(count_nodes(state)); }

TurnRecord take_turn(GameState &state, PlayerColor player, const Strategy &strategy, Rng &rng) {
  if (state.to_move() != player)
    throw IllegalMove("not " + to_string(player) + "'s turn");
  TurnRecord rec{state.turn_index(), player, Move::pass(), {}};
  const int budget = state.budget(player);
  const TokenPolicy policy = state.policy(player);

  if (budget > 0) {
    const auto eligible = eligible_nodes(state, player);
    std::vector<NodeId> excluded;
    auto tried = [&](NodeId v) { return std::find(excluded.begin(), excluded.end(), v) != excluded.end(); };
    std::size_t remaining = eligible.size();
    // each iteration either finishes or excludes a fresh node
    while (remaining > 0) {
      const auto choice = strategy.choose(state, player, excluded, rng);
      if (!choice || tried(choice->node))
        break;
      const NodeId v = choice->node;
      excluded.push_back(v);
      if (!is_eligible(state, player, v))
        continue;
      --remaining;
      const int cap = capacity(state, v);
      int amount = cap;
      if (policy == TokenPolicy::OneToken) {
        amount = 1;
      } else if (policy == TokenPolicy::ChosenAmount) {
        if (!choice->amount)
          throw std::logic_error(strategy.name() + " gave no amount under the ChosenAmount policy");
        amount = std::clamp(*choice->amount, 1, cap);
      }
      if (amount > budget)
        continue;
      rec.move = Move::donate(v, amount);
      break;
    }
  }
  rec.activations = state.apply(rec.move);
  return rec;
}

PlayerSeeds player_seeds(std::uint64_t seed) {
  return {derive_seed(seed, 0, "red"), derive_seed(seed, 1, "black")};
}

GameResult play_game(std::shared_ptr<const Graph> graph, const GameConfig &cfg,
                     const Strategy &strat_red, const Strategy &strat_black, std::uint64_t seed) {
  return play_game(std::move(graph), cfg, strat_red, strat_black, player_seeds(seed));
}

GameResult play_game(std::shared_ptr<const Graph> graph, const GameConfig &cfg,
                     const Strategy &strat_red, const Strategy &strat_black, PlayerSeeds seeds) {
  if (cfg.policy_red == TokenPolicy::ChosenAmount && !strat_red.emits_amount())
    throw std::invalid_argument(strat_red.name() + " cannot play the ChosenAmount policy");
  if (cfg.policy_black == TokenPolicy::ChosenAmount && !strat_black.emits_amount())
    throw std::invalid_argument(strat_black.name() + " cannot play the ChosenAmount policy");

  GameState state(std::move(graph), cfg);
  Rng red_rng(seeds.red);
  Rng black_rng(seeds.black);
  GameResult result;
  while (!state.is_over()) {
    const PlayerColor p = state.to_move();
    const bool red = p == PlayerColor::Red;
    result.trace.push_back(take_turn(state, p, red ? strat_red : strat_black, red ? red_rng : black_rng));
  }
  const auto counts = count_nodes(state);
  result.red_nodes = counts.red;
  result.black_nodes = counts.black;
  result.outcome = winner(counts);
  result.turns = state.turn_index();
  return result;
}

std::string trace_to_text(const std::vector<TurnRecord> &trace) {
  std::ostringstream out;
  for (const auto &r : trace) {
    out << "turn=" << r.turn_index << " player=" << to_string(r.player);
    if (r.move.is_pass())
      out << " move=pass";
    else
      out << " move=donate node=" << r.move.node << " amount=" << r.move.amount;
    out << " activations=";
    for (std::size_t i = 0; i < r.activations.size(); ++i)
      out << (i ? "," : "") << r.activations[i].node << ':' << to_string(r.activations[i].color);
    out << '\n';
  }
  return out.str();
}

std::string trace_to_json(const GameResult &result) {
  nlohmann::json j;
  j["outcome"] = to_string(result.outcome);
  j["red_nodes"] = result.red_nodes;
  j["black_nodes"] = result.black_nodes;
  j["turns"] = result.turns;
  auto &turns = j["trace"] = nlohmann::json::array();
  for (const auto &r : result.trace) {
    nlohmann::json t;
    t["turn_index"] = r.turn_index;
    t["player"] = to_string(r.player);
    if (r.move.is_pass()) {
      t["move"] = {{"kind", "pass"}};
    } else {
      t["move"] = {{"kind", "donate"}, {"node", r.move.node}, {"amount", r.move.amount}};
    }
    auto &acts = t["activations"] = nlohmann::json::array();
    for (const auto &a : r.activations)
      acts.push_back({{"node", a.node}, {"color", to_string(a.color)}});
    turns.push_back(std::move(t));
  }
  return j.dump(2);
}

} // namespace lbcim
