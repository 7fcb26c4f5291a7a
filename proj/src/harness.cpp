#include "lbcim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace lbcim {

Dataset parse_dataset(const std::string &text) {
  Dataset d;
  if (text == "sw" || text == "small-world")
    d.kind = DatasetKind::SmallWorld;
  else if (text == "sf" || text == "scale-free")
    d.kind = DatasetKind::ScaleFree;
  else if (text == "er" || text == "random")
    d.kind = DatasetKind::RandomGraph;
  else if (text.rfind("file:", 0) == 0 && text.size() > 5) {
    d.kind = DatasetKind::File;
    d.path = text.substr(5);
  } else
    throw std::invalid_argument("unknown dataset '" + text + "' (sw, sf, er, file:<path>)");
  return d;
}

std::string to_string(const Dataset &d) {
  switch (d.kind) {
  case DatasetKind::SmallWorld:
    return "sw";
  case DatasetKind::ScaleFree:
    return "sf";
  case DatasetKind::RandomGraph:
    return "er";
  case DatasetKind::File:
    return "file:" + d.path.string();
  }
  return "?";
}

GenParams sample_synthetic_params(DatasetKind kind, Rng &rng) {
  const int n = uniform_int(rng, 30, 100);
  switch (kind) {
  case DatasetKind::SmallWorld:
    return WsParams{n, uniform_int(rng, 3, 7), 0.3};
  case DatasetKind::ScaleFree:
    return BaParams{n, uniform_int(rng, 1, n / 3)};
  case DatasetKind::RandomGraph:
    return ErParams{n, 0.3};
  case DatasetKind::File:
    break;
  }
  throw std::invalid_argument("file datasets have no synthetic parameters");
}

std::shared_ptr<const Graph> synthetic_graph(DatasetKind kind, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0, "params"));
  const auto params = sample_synthetic_params(kind, rng);
  return std::make_shared<const Graph>(generate(params, derive_seed(seed, 0, "edges")));
}

std::shared_ptr<const Graph> file_dataset_graph(const Dataset &d, std::uint64_t seed) {
  const auto loaded = load_edge_list(d.path);
  if (static_cast<int>(loaded.graph.node_count()) <= d.sample)
    return std::make_shared<const Graph>(loaded.graph);
  return std::make_shared<const Graph>(
      extract_cluster_sample(loaded.graph, d.target_cluster, d.sample, seed));
}

std::unique_ptr<Strategy> make_strategy(const StrategySpec &spec) {
  if (spec.name == "random")
    return std::make_unique<RandomStrategy>();
  if (spec.name == "min-threshold")
    return std::make_unique<MinThresholdStrategy>();
  if (spec.name == "max-threshold")
    return std::make_unique<MaxThresholdStrategy>();
  if (spec.name == "minimax")
    return std::make_unique<MinimaxStrategy>(spec.minimax);
  if (spec.name == "mcts" || spec.name == "eps-mcts") {
    MctsConfig cfg = spec.mcts;
    cfg.rollout = spec.name == "mcts" ? RolloutMode::Random : RolloutMode::EpsGreedy;
    return std::make_unique<MctsStrategy>(cfg);
  }
  throw std::invalid_argument("unknown strategy '" + spec.name + "'");
}

void ExperimentSpec::validate() const {
  if (games < 1)
    throw std::invalid_argument("games must be >= 1");
  if (budget && *budget < 0)
    throw std::invalid_argument("budget must be non-negative");
  make_strategy(black);
  make_strategy(red);
}

Rates rates(int w, int l, int d) {
  if (w < 0 || l < 0 || d < 0)
    throw std::invalid_argument("rates: negative count");
  const int total = w + l + d;
  if (total == 0)
    throw std::invalid_argument("rates: no games");
  const double t = total;
  return {w / t, l / t, d / t};
}

TournamentStats tally(const std::vector<GameRecord> &records) {
  TournamentStats s;
  for (const auto &r : records) {
    s.w += r.winner == Outcome::BlackWin;
    s.l += r.winner == Outcome::RedWin;
    s.d += r.winner == Outcome::Draw;
  }
  if (s.games() > 0) {
    const auto r = rates(s.w, s.l, s.d);
    s.win_rate = r.win_rate;
    s.loss_rate = r.loss_rate;
    s.draw_rate = r.draw_rate;
  }
  return s;
}

PlayerColor starter_for(int game_index) {
  return game_index % 2 == 0 ? PlayerColor::Black : PlayerColor::Red;
}

namespace {

GameRecord play_record(const ExperimentSpec &spec, int run_id, PlayerColor starter,
                       const std::shared_ptr<const Graph> &graph, std::uint64_t seed) {
  const auto black = make_strategy(spec.black);
  const auto red = make_strategy(spec.red);
  GameConfig cfg;
  cfg.budget_black = spec.budget;
  cfg.budget_red = spec.budget;
  cfg.policy_black = spec.policy_black;
  cfg.policy_red = spec.policy_red;
  cfg.starter = starter;
  const GameState initial(graph, cfg);
  const auto result = play_game(graph, cfg, *red, *black, derive_seed(seed, 0, "play"));

  GameRecord rec;
  rec.run_id = run_id;
  rec.starter = starter;
  rec.winner = result.outcome;
  rec.black_nodes = result.black_nodes;
  rec.red_nodes = result.red_nodes;
  rec.turns = result.turns;
  rec.graph_n = static_cast<int>(graph->node_count());
  rec.graph_m = static_cast<int>(graph->edge_count());
  rec.seed = seed;
  rec.budget = initial.initial_budget(PlayerColor::Black);
  return rec;
}

std::shared_ptr<const Graph> fixed_graph_for(const ExperimentSpec &spec) {
  if (spec.dataset.kind != DatasetKind::File)
    return nullptr;
  return file_dataset_graph(spec.dataset, derive_seed(spec.master_seed, 0, "dataset"));
}

// Runs job(i) for i in [0, count) on `jobs` threads; rethrows the first error.
template <class Job> void parallel_for(int count, int jobs, Job job) {
  int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i)
      job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error)
            error = std::current_exception();
        }
      }
    });
  for (auto &t : pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
}

} // namespace

GameRecord run_single_game(const ExperimentSpec &spec, int game_index,
                           const std::shared_ptr<const Graph> &fixed_graph) {
  const std::uint64_t seed = derive_seed(spec.master_seed, static_cast<std::uint64_t>(game_index), "game");
  auto graph = fixed_graph;
  if (!graph)
    graph = spec.dataset.kind == DatasetKind::File
                ? fixed_graph_for(spec)
                : synthetic_graph(spec.dataset.kind, derive_seed(seed, 0, "graph"));
  return play_record(spec, game_index, starter_for(game_index), graph, seed);
}

MatchResult run_match(const ExperimentSpec &spec) {
  spec.validate();
  const auto fixed = fixed_graph_for(spec);
  MatchResult out;
  out.records.resize(static_cast<std::size_t>(spec.games));
  parallel_for(spec.games, spec.jobs, [&](int i) {
    out.records[static_cast<std::size_t>(i)] = run_single_game(spec, i, fixed);
  });
  out.stats = tally(out.records);
  return out;
}

RandomnessRow randomness_row(int red_wins, int black_wins, int draws) {
  const auto r = rates(black_wins, red_wins, draws);
  RandomnessRow row;
  row.red_wins = red_wins;
  row.black_wins = black_wins;
  row.draws = draws;
  row.red_pct = 100.0 * r.loss_rate;
  row.black_pct = 100.0 * r.win_rate;
  row.draw_pct = 100.0 * r.draw_rate;
  return row;
}

RandomnessTable randomness_table(const ExperimentSpec &base, int graphs, int runs_per_graph) {
  if (graphs < 1 || runs_per_graph < 1)
    throw std::invalid_argument("randomness_table: graphs and runs must be >= 1");
  base.validate();
  std::vector<std::shared_ptr<const Graph>> boards;
  const auto fixed = fixed_graph_for(base);
  for (int g = 0; g < graphs; ++g)
    boards.push_back(fixed ? fixed
                           : synthetic_graph(base.dataset.kind,
                                             derive_seed(base.master_seed, static_cast<std::uint64_t>(g), "table-graph")));

  RandomnessTable table;
  const int total = graphs * runs_per_graph;
  table.records.resize(static_cast<std::size_t>(total));
  parallel_for(total, base.jobs, [&](int i) {
    const int g = i / runs_per_graph;
    const int r = i % runs_per_graph;
    const auto seed = derive_seed(derive_seed(base.master_seed, static_cast<std::uint64_t>(g), "table"),
                                  static_cast<std::uint64_t>(r), "run");
    table.records[static_cast<std::size_t>(i)] =
        play_record(base, i, PlayerColor::Black, boards[static_cast<std::size_t>(g)], seed);
  });

  for (int g = 0; g < graphs; ++g) {
    int red = 0, black = 0, draw = 0;
    for (int r = 0; r < runs_per_graph; ++r) {
      const auto &rec = table.records[static_cast<std::size_t>(g * runs_per_graph + r)];
      red += rec.winner == Outcome::RedWin;
      black += rec.winner == Outcome::BlackWin;
      draw += rec.winner == Outcome::Draw;
    }
    auto row = randomness_row(red, black, draw);
    row.graph_n = static_cast<int>(boards[static_cast<std::size_t>(g)]->node_count());
    row.graph_m = static_cast<int>(boards[static_cast<std::size_t>(g)]->edge_count());
    table.rows.push_back(row);
  }
  return table;
}

Formation parse_formation(const std::string &s) {
  if (s == "fire-vs-one")
    return Formation::FireVsOne;
  if (s == "choose-vs-one")
    return Formation::ChooseVsOne;
  if (s == "fire-vs-choose")
    return Formation::FireVsChoose;
  throw std::invalid_argument("unknown formation '" + s + "'");
}

std::string to_string(Formation f) {
  switch (f) {
  case Formation::FireVsOne:
    return "fire-vs-one";
  case Formation::ChooseVsOne:
    return "choose-vs-one";
  case Formation::FireVsChoose:
    return "fire-vs-choose";
  }
  return "?";
}

std::pair<TokenPolicy, TokenPolicy> formation_policies(Formation f) {
  switch (f) {
  case Formation::FireVsOne:
    return {TokenPolicy::FireCapacity, TokenPolicy::OneToken};
  case Formation::ChooseVsOne:
    return {TokenPolicy::ChosenAmount, TokenPolicy::OneToken};
  case Formation::FireVsChoose:
    return {TokenPolicy::FireCapacity, TokenPolicy::ChosenAmount};
  }
  throw std::invalid_argument("bad formation");
}

MatchResult token_policy_experiment(Formation formation, const Dataset &dataset, int games,
                                    std::uint64_t master_seed, const MctsConfig &mcts,
                                    std::optional<int> budget, int jobs) {
  const auto [black_policy, red_policy] = formation_policies(formation);
  const std::string name = mcts.rollout == RolloutMode::Random ? "mcts" : "eps-mcts";
  auto side = [&](TokenPolicy p) {
    StrategySpec s{name, mcts, {}};
    s.mcts.amount_mode = p == TokenPolicy::ChosenAmount ? AmountMode::ChooseAmount : AmountMode::Fire;
    return s;
  };
  ExperimentSpec spec;
  spec.dataset = dataset;
  spec.black = side(black_policy);
  spec.red = side(red_policy);
  spec.games = games;
  spec.budget = budget;
  spec.policy_black = black_policy;
  spec.policy_red = red_policy;
  spec.master_seed = master_seed;
  spec.jobs = jobs;
  return run_match(spec);
}

ResultFormat format_for(const std::filesystem::path &path) {
  const auto ext = path.extension().string();
  if (ext == ".json")
    return ResultFormat::Json;
  if (ext == ".csv")
    return ResultFormat::Csv;
  throw std::invalid_argument("output must end in .csv or .json: '" + path.string() + "'");
}

namespace {

constexpr const char *kCsvHeader = "run_id,starter,winner,black_nodes,red_nodes,turns,graph_n,graph_m,seed";

Outcome parse_outcome(const std::string &s) {
  if (s == "red")
    return Outcome::RedWin;
  if (s == "black")
    return Outcome::BlackWin;
  if (s == "draw")
    return Outcome::Draw;
  throw DataError("bad winner field '" + s + "'");
}

void write_file(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DataError("cannot write '" + path.string() + "'");
  out << content;
  if (!out)
    throw DataError("write failed for '" + path.string() + "'");
}

} // namespace

std::string records_to_csv(const std::vector<GameRecord> &records) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto &r : records)
    out << r.run_id << ',' << to_string(r.starter) << ',' << to_string(r.winner) << ','
        << r.black_nodes << ',' << r.red_nodes << ',' << r.turns << ',' << r.graph_n << ','
        << r.graph_m << ',' << r.seed << '\n';
  return out.str();
}

std::vector<GameRecord> parse_records_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw DataError("results CSV: unexpected header");
  std::vector<GameRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty())
      continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');)
      f.push_back(cell);
    if (f.size() != 9)
      throw DataError("results CSV: line " + std::to_string(line_no) + " has " +
                      std::to_string(f.size()) + " fields");
    try {
      GameRecord r;
      r.run_id = std::stoi(f[0]);
      r.starter = parse_color(f[1]);
      r.winner = parse_outcome(f[2]);
      r.black_nodes = std::stoi(f[3]);
      r.red_nodes = std::stoi(f[4]);
      r.turns = std::stoi(f[5]);
      r.graph_n = std::stoi(f[6]);
      r.graph_m = std::stoi(f[7]);
      r.seed = std::stoull(f[8]);
      out.push_back(r);
    } catch (const std::logic_error &e) {
      throw DataError("results CSV: line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string records_to_json(const std::vector<GameRecord> &records) {
  auto rows = nlohmann::json::array();
  for (const auto &r : records)
    rows.push_back({{"run_id", r.run_id},
                    {"starter", to_string(r.starter)},
                    {"winner", to_string(r.winner)},
                    {"black_nodes", r.black_nodes},
                    {"red_nodes", r.red_nodes},
                    {"turns", r.turns},
                    {"graph_n", r.graph_n},
                    {"graph_m", r.graph_m},
                    {"seed", r.seed},
                    {"budget", r.budget}});
  return nlohmann::json{{"records", rows}}.dump(2) + "\n";
}

std::vector<GameRecord> parse_records_json(const std::string &text) {
  std::vector<GameRecord> out;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto &row : j.at("records")) {
      GameRecord r;
      r.run_id = row.at("run_id").get<int>();
      r.starter = parse_color(row.at("starter").get<std::string>());
      r.winner = parse_outcome(row.at("winner").get<std::string>());
      r.black_nodes = row.at("black_nodes").get<int>();
      r.red_nodes = row.at("red_nodes").get<int>();
      r.turns = row.at("turns").get<int>();
      r.graph_n = row.at("graph_n").get<int>();
      r.graph_m = row.at("graph_m").get<int>();
      r.seed = row.at("seed").get<std::uint64_t>();
      r.budget = row.at("budget").get<int>();
      out.push_back(r);
    }
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("results JSON: ") + e.what());
  }
  return out;
}

std::filesystem::path plot_path_for(const std::filesystem::path &path) {
  auto p = path;
  p.replace_extension(".plot.csv");
  return p;
}

void emit_results(const std::vector<GameRecord> &records, const std::filesystem::path &path,
                  ResultFormat format, const PlotSeries *series) {
  if (records.empty())
    throw std::invalid_argument("emit_results: no records");
  write_file(path, format == ResultFormat::Csv ? records_to_csv(records) : records_to_json(records));
  if (!series)
    return;
  const auto s = tally(records);
  std::ostringstream plot;
  plot << "black_strategy,red_strategy,dataset,budget,games,wins,losses,draws,win_rate,loss_rate,"
          "draw_rate\n";
  // budgets that default to the node count differ per game; reported as "n"
  const bool same_budget = std::all_of(records.begin(), records.end(), [&](const GameRecord &r) {
    return r.budget == records.front().budget;
  });
  plot << series->black_strategy << ',' << series->red_strategy << ',' << series->dataset << ','
       << (same_budget ? std::to_string(records.front().budget) : std::string("n")) << ','
       << s.games() << ',' << s.w << ',' << s.l << ',' << s.d << ',' << s.win_rate << ','
       << s.loss_rate << ',' << s.draw_rate << '\n';
  write_file(plot_path_for(path), plot.str());
}

} // namespace lbcim
