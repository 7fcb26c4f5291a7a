#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lbcim/engine.hpp"
#include "lbcim/graph.hpp"
#include "lbcim/mcts.hpp"
#include "lbcim/strategies.hpp"

namespace lbcim {

enum class DatasetKind : std::uint8_t { SmallWorld, ScaleFree, RandomGraph, File };

struct Dataset {
  DatasetKind kind = DatasetKind::SmallWorld;
  std::filesystem::path path; // File only
  int target_cluster = 198;
  int sample = 100;
};

// "sw", "sf", "er" or "file:<path>".
Dataset parse_dataset(const std::string &text);
std::string to_string(const Dataset &d);

// Synthetic generator parameters drawn from the experiment ranges:
// n in [30, 100]; small world k in [3, 7], p = 0.3; scale free
// m in [1, floor(n/3)]; random graph p = 0.3.
GenParams sample_synthetic_params(DatasetKind kind, Rng &rng);

std::shared_ptr<const Graph> synthetic_graph(DatasetKind kind, std::uint64_t seed);

// For file datasets: load, run label propagation and take the cluster sample.
std::shared_ptr<const Graph> file_dataset_graph(const Dataset &d, std::uint64_t seed);

struct StrategySpec {
  std::string name = "eps-mcts";
  MctsConfig mcts;
  MinimaxConfig minimax;
};

// Names: random, min-threshold, max-threshold, minimax, mcts, eps-mcts.
// "mcts" forces random rollouts, "eps-mcts" eps-greedy ones.
std::unique_ptr<Strategy> make_strategy(const StrategySpec &spec);

struct ExperimentSpec {
  Dataset dataset;
  StrategySpec black;
  StrategySpec red;
  int games = 100;
  std::optional<int> budget; // per player; nullopt = node count
  TokenPolicy policy_black = TokenPolicy::FireCapacity;
  TokenPolicy policy_red = TokenPolicy::FireCapacity;
  std::uint64_t master_seed = 1;
  int jobs = 0; // worker threads; 0 = hardware concurrency

  void validate() const;
};

struct GameRecord {
  int run_id = 0;
  PlayerColor starter = PlayerColor::Black;
  Outcome winner = Outcome::Draw;
  int black_nodes = 0;
  int red_nodes = 0;
  int turns = 0;
  int graph_n = 0;
  int graph_m = 0;
  std::uint64_t seed = 0;
  int budget = 0;

  bool operator==(const GameRecord &) const = default;
};

struct Rates {
  double win_rate = 0.0;
  double loss_rate = 0.0;
  double draw_rate = 0.0;
};

// w / (w + l + d) etc. Throws std::invalid_argument when no games were played.
Rates rates(int w, int l, int d);

// Counts from Black's side: w = black wins, l = red wins.
struct TournamentStats {
  int w = 0;
  int l = 0;
  int d = 0;
  double win_rate = 0.0;
  double loss_rate = 0.0;
  double draw_rate = 0.0;

  int games() const { return w + l + d; }
};

TournamentStats tally(const std::vector<GameRecord> &records);

struct MatchResult {
  TournamentStats stats;
  std::vector<GameRecord> records; // sorted by run_id
};

// Even game indices start with Black, odd with Red.
PlayerColor starter_for(int game_index);

// Every game is a pure function of (spec, game_index).
GameRecord run_single_game(const ExperimentSpec &spec, int game_index,
                           const std::shared_ptr<const Graph> &fixed_graph = nullptr);

MatchResult run_match(const ExperimentSpec &spec);

struct RandomnessRow {
  int graph_n = 0;
  int graph_m = 0;
  int red_wins = 0;
  int black_wins = 0;
  int draws = 0;
  double red_pct = 0.0;
  double black_pct = 0.0;
  double draw_pct = 0.0;
};

RandomnessRow randomness_row(int red_wins, int black_wins, int draws);

struct RandomnessTable {
  std::vector<RandomnessRow> rows;
  std::vector<GameRecord> records;
};

// `graphs` fixed graphs, `runs_per_graph` games on each that differ only in
// their seed. Black starts every game.
RandomnessTable randomness_table(const ExperimentSpec &base, int graphs = 5,
                                 int runs_per_graph = 20);

enum class Formation : std::uint8_t { FireVsOne, ChooseVsOne, FireVsChoose };

Formation parse_formation(const std::string &s);
std::string to_string(Formation f);

// Black and Red token policies for a formation.
std::pair<TokenPolicy, TokenPolicy> formation_policies(Formation f);

// Both players search with MCTS (`mcts` config, amount mode set per side).
MatchResult token_policy_experiment(Formation formation, const Dataset &dataset, int games,
                                    std::uint64_t master_seed, const MctsConfig &mcts,
                                    std::optional<int> budget = std::nullopt, int jobs = 0);

enum class ResultFormat : std::uint8_t { Csv, Json };

ResultFormat format_for(const std::filesystem::path &path);

struct PlotSeries {
  std::string black_strategy;
  std::string red_strategy;
  std::string dataset;
};

std::string records_to_csv(const std::vector<GameRecord> &records);
std::string records_to_json(const std::vector<GameRecord> &records);
std::vector<GameRecord> parse_records_csv(const std::string &text);
std::vector<GameRecord> parse_records_json(const std::string &text);

// Writes the records, plus "<stem>.plot.csv" next to them when `series` is
// given. Throws DataError when the path cannot be written.
void emit_results(const std::vector<GameRecord> &records, const std::filesystem::path &path,
                  ResultFormat format, const PlotSeries *series = nullptr);

std::filesystem::path plot_path_for(const std::filesystem::path &path);

} // namespace lbcim
