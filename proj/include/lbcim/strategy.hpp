#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "lbcim/graph.hpp"
#include "lbcim/random.hpp"

namespace lbcim {

class GameState;
enum class PlayerColor : std::uint8_t;

// A strategy's answer for one query: the node to fund and, for strategies
// that pick the donation size themselves, the amount.
struct Choice {
  NodeId node = -1;
  std::optional<int> amount;
};

// Move-selection contract shared by every player implementation.
//
// choose() must return a node that is eligible for `player` and not in
// `excluded`, or nullopt when it has nothing to offer. Implementations hold
// no mutable state; all randomness comes from `rng`.
class Strategy {
public:
  virtual ~Strategy() = default;

  virtual std::optional<Choice> choose(const GameState &state, PlayerColor player,
                                       std::span<const NodeId> excluded, Rng &rng) const = 0;

  virtual std::string name() const = 0;

  // True when choose() fills Choice::amount (needed by the ChosenAmount policy).
  virtual bool emits_amount() const { return false; }
};

} // namespace lbcim
