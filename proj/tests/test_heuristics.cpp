#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "lbcim/heuristics.hpp"
#include "support.hpp"

using namespace lbcim;
using lbcim::testing::board;

namespace {

std::shared_ptr<const Graph> star4() { return board(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}); }

std::array<double, 4> raw_of(const ScoredNode &s) { return {s.ph, s.hwn, s.nlt, s.hva}; }

// Reference combination: min-max per column (constant -> 0.5), equal weights.
std::vector<double> reference_finals(const std::vector<std::array<double, 4>> &rows) {
  std::vector<double> out(rows.size(), 0.0);
  for (std::size_t c = 0; c < 4; ++c) {
    double lo = rows[0][c], hi = rows[0][c];
    for (const auto &r : rows) {
      lo = std::min(lo, r[c]);
      hi = std::max(hi, r[c]);
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
      out[i] += 0.25 * (hi > lo ? (rows[i][c] - lo) / (hi - lo) : 0.5);
  }
  return out;
}

std::vector<std::size_t> ranking(const std::vector<double> &finals) {
  std::vector<std::size_t> idx(finals.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return finals[a] > finals[b]; });
  return idx;
}

GameState fuzzed(Rng &rng) {
  const auto g = lbcim::testing::fuzz_graph(rng, 3, 14, 0.4);
  return lbcim::testing::fuzz_position(g, rng, 15, uniform_int(rng, 0, 10));
}

} // namespace

TEST_CASE("parity") {
  GameState s(star4(), {});
  s.set_node(0, {4, 1, 3, NodeState::Inactive});
  CHECK(ph(s, 0, PlayerColor::Black) == 2.0);
  CHECK(ph(s, 0, PlayerColor::Red) == -2.0);
  CHECK(ph(s, 1, PlayerColor::Black) == 0.0);
}

TEST_CASE("hubs with weak neighbors") {
  const auto g = star4();
  CHECK(hwn(*g, 0) == doctest::Approx(4.0));
  CHECK(hwn(*g, 1) == doctest::Approx(0.25));
  const auto lone = board(2, {});
  CHECK(hwn(*lone, 0) == 0.0);
}

TEST_CASE("low threshold") {
  GameState s(star4(), {});
  CHECK(nlt(s, 0, PlayerColor::Black) == doctest::Approx(0.25));
  s.set_node(0, {4, 0, 0, NodeState::Red});
  CHECK(nlt(s, 0, PlayerColor::Black) == doctest::Approx(0.5));
  CHECK(nlt(s, 0, PlayerColor::Black, 3.0) == doctest::Approx(0.75));
  CHECK(nlt(s, 1, PlayerColor::Black) == doctest::Approx(1.0));
}

TEST_CASE("hubs on the verge of activation") {
  const auto g = board(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  GameState s(g, {});
  s.set_node(0, {5, 0, 4, NodeState::Inactive}); // capacity 1
  CHECK(hva(s, 0) == doctest::Approx(2.5));
  s.set_node(0, {5, 0, 0, NodeState::Inactive}); // capacity 5
  CHECK(hva(s, 0) == doctest::Approx(5.0 / 6.0));
  s.set_node(0, {5, 0, 5, NodeState::Black}); // capacity 0
  CHECK(hva(s, 0) == doctest::Approx(5.0));
  s.set_node(0, {9, 0, 5, NodeState::Black}); // capacity 4
  CHECK(hva(s, 0) == doctest::Approx(1.0));
  const auto lone = board(1, {});
  CHECK(hva(GameState(lone, {}), 0) == 0.0);
}

TEST_CASE("combined metric on a five-node star") {
  GameState s(star4(), {});
  s.set_node(0, {4, 0, 1, NodeState::Inactive});
  s.set_node(2, {1, 0, 0, NodeState::Red});
  const std::vector<NodeId> cand{0, 1, 2};
  // raw columns (ph, hwn, nlt, hva):
  //   0: (1, 4,    0.25, 1.0)
  //   1: (0, 0.25, 1,    0.5)
  //   2: (0, 0.25, 2,    0.5)
  // normalized nlt: 0, 3/7, 1
  const auto rows = final_metric(s, cand, PlayerColor::Black);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].node == 0);
  CHECK(rows[0].final == doctest::Approx(0.75));
  CHECK(rows[1].node == 2);
  CHECK(rows[1].final == doctest::Approx(0.25));
  CHECK(rows[2].node == 1);
  CHECK(rows[2].final == doctest::Approx(0.25 * 3.0 / 7.0));
  CHECK(rows[0].hwn == doctest::Approx(4.0));
  CHECK(rows[1].nlt == doctest::Approx(2.0));
}

TEST_CASE("single candidate and ties") {
  GameState s(star4(), {});
  const std::vector<NodeId> one{3};
  CHECK(final_metric(s, one, PlayerColor::Red)[0].final == doctest::Approx(0.5));
  const std::vector<NodeId> leaves{4, 2, 3};
  const auto rows = final_metric(s, leaves, PlayerColor::Red);
  CHECK(rows[0].node == 2);
  CHECK(rows[1].node == 3);
  CHECK(rows[2].node == 4);
  CHECK_THROWS_AS(final_metric(s, {}, PlayerColor::Red), std::invalid_argument);
  CHECK_THROWS_AS(score_candidates(s, {}, PlayerColor::Red), std::invalid_argument);
}

TEST_CASE("dominant candidate ranks first") {
  GameState s(star4(), {});
  s.set_node(0, {4, 0, 2, NodeState::Red});
  const std::vector<NodeId> cand{1, 0};
  const auto rows = final_metric(s, cand, PlayerColor::Black);
  CHECK(rows[0].node == 0);
}

TEST_CASE("weights") {
  HeuristicWeights w;
  CHECK_NOTHROW(w.validate());
  w.alpha = 0.5;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w = {0.5, 0.5, 0.0, 0.0};
  CHECK_NOTHROW(w.validate());
  w = {1.25, -0.25, 0.0, 0.0};
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}

TEST_CASE("metric properties over fuzzed positions") {
  Rng rng(31);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const GameState s = fuzzed(rng);
    const PlayerColor p = bernoulli(rng, 0.5) ? PlayerColor::Red : PlayerColor::Black;
    const auto cand = eligible_nodes(s, p);
    if (cand.empty())
      continue;
    ++checked;
    const auto scored = score_candidates(s, cand, p);

    std::vector<std::array<double, 4>> raw;
    for (const auto &r : scored)
      raw.push_back(raw_of(r));
    const auto ref = reference_finals(raw);
    for (std::size_t k = 0; k < scored.size(); ++k) {
      CHECK(scored[k].final >= 0.0);
      CHECK(scored[k].final <= 1.0);
      CHECK(scored[k].final == doctest::Approx(ref[k]).epsilon(1e-12));
    }

    // Pareto monotonicity
    for (std::size_t a = 0; a < raw.size(); ++a)
      for (std::size_t b = 0; b < raw.size(); ++b) {
        bool ge = true, gt = false;
        for (std::size_t c = 0; c < 4; ++c) {
          ge = ge && raw[a][c] >= raw[b][c];
          gt = gt || raw[a][c] > raw[b][c];
        }
        if (ge && gt)
          CHECK(scored[a].final >= scored[b].final);
      }

    // positive scaling of one column leaves the order alone
    const std::size_t col = uniform_index(rng, 4);
    const double factor = 0.1 + 10.0 * uniform_real(rng);
    auto scaled = raw;
    for (auto &r : scaled)
      r[col] *= factor;
    const auto base_rank = ranking(ref);
    const auto scaled_rank = ranking(reference_finals(scaled));
    std::vector<double> a, b;
    for (std::size_t k = 0; k < base_rank.size(); ++k) {
      a.push_back(ref[base_rank[k]]);
      b.push_back(ref[scaled_rank[k]]);
    }
    for (std::size_t k = 0; k < a.size(); ++k)
      CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-9));

    // parity antisymmetry
    for (NodeId v : cand)
      CHECK(ph(s, v, PlayerColor::Red) == -ph(s, v, PlayerColor::Black));
  }
  CHECK(checked > 100);
}
