// lbcim: command line front end for the loyalty-based CIM simulator.
//
//   lbcim gen-graph  --model ws --n 50 --k 4 --p 0.3 --seed 1 --out g.txt
//   lbcim play       --graph g.txt --black eps-mcts --red random --seed 3
//   lbcim match      --dataset sw --black eps-mcts --red mcts --games 100 --out r.csv
//   lbcim randomness --dataset sw --graphs 5 --runs 20
//   lbcim tokens-exp --formation fire-vs-choose --dataset sf --games 40
//
// Any subcommand accepts --config <file> with flat "key = value" lines named
// after the long flags; flags on the command line win.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lbcim/engine.hpp"
#include "lbcim/graph.hpp"
#include "lbcim/harness.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pulls "--config <path>" out of argv and appends the file's entries as
// "--key value" after the user's own arguments. Options take the first value
// given, so command-line flags override the file.
std::vector<std::string> expand_config(int argc, char **argv) {
  std::vector<std::string> args;
  std::string config;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config") {
      if (i + 1 >= argc)
        throw UsageError("--config needs a path");
      config = argv[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config = a.substr(9);
    } else {
      args.push_back(std::move(a));
    }
  }
  if (config.empty())
    return args;
  std::ifstream in(config);
  if (!in)
    throw lbcim::DataError("cannot read config '" + config + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw lbcim::DataError(config + ":" + std::to_string(line_no) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r\"");
      const auto e = s.find_last_not_of(" \t\r\"");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    auto key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0)
      key = key.substr(2);
    args.push_back("--" + key);
    args.push_back(trim(line.substr(eq + 1)));
  }
  return args;
}

struct SearchFlags {
  int iterations = 1000;
  double epsilon = 0.7;
  double uct_c = std::sqrt(2.0);
  int time_cap_ms = 0;
  std::string amount_mode = "fire";
  int depth = 4;
  double nlt_bonus = 2.0;
  std::vector<double> weights{0.25, 0.25, 0.25, 0.25};

  void add_to(CLI::App &app) {
    app.add_option("--iterations", iterations, "MCTS iterations per move")->check(CLI::NonNegativeNumber);
    app.add_option("--epsilon", epsilon, "eps-greedy rollout: probability of the best node")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--uct-c", uct_c, "UCT exploration constant")->check(CLI::NonNegativeNumber);
    app.add_option("--time-cap-ms", time_cap_ms, "optional wall-clock cap per MCTS move")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--amount-mode", amount_mode, "MCTS players fire nodes or choose amounts")
        ->check(CLI::IsMember({"fire", "choose"}));
    app.add_option("--depth", depth, "minimax depth in plies")->check(CLI::PositiveNumber);
    app.add_option("--nlt-bonus", nlt_bonus, "NLT multiplier for opponent-held nodes");
    app.add_option("--weights", weights, "heuristic weights alpha beta gamma lambda")->expected(4);
  }

  lbcim::StrategySpec spec(const std::string &name) const {
    lbcim::StrategySpec s;
    s.name = name;
    s.mcts.iterations = iterations;
    s.mcts.epsilon = epsilon;
    s.mcts.c = uct_c;
    if (time_cap_ms > 0)
      s.mcts.time_cap = std::chrono::milliseconds(time_cap_ms);
    s.mcts.amount_mode = amount_mode == "choose" ? lbcim::AmountMode::ChooseAmount : lbcim::AmountMode::Fire;
    s.mcts.heuristics.opponent_bonus = nlt_bonus;
    s.mcts.heuristics.weights = {weights[0], weights[1], weights[2], weights[3]};
    s.minimax.depth = depth;
    return s;
  }
};

bool is_mcts(const std::string &name) { return name == "mcts" || name == "eps-mcts"; }

lbcim::TokenPolicy policy_of(const lbcim::StrategySpec &s) {
  return is_mcts(s.name) ? lbcim::policy_for(s.mcts.amount_mode) : lbcim::TokenPolicy::FireCapacity;
}

const std::vector<std::string> kStrategies{"random", "min-threshold", "max-threshold",
                                           "minimax", "mcts", "eps-mcts"};

// "file.txt", or "<model>:key=value,..." e.g. "ws:n=50,k=4,p=0.3", or
// "sw" / "sf" / "er" for a draw from the experiment parameter ranges.
std::shared_ptr<const lbcim::Graph> graph_from_spec(const std::string &text, std::uint64_t seed) {
  if (text == "sw" || text == "sf" || text == "er")
    return lbcim::synthetic_graph(lbcim::parse_dataset(text).kind, seed);
  const auto colon = text.find(':');
  const std::string model = colon == std::string::npos ? "" : text.substr(0, colon);
  if (model != "er" && model != "ba" && model != "ws") {
    auto loaded = lbcim::load_edge_list(text);
    if (loaded.dropped_self_loops + loaded.dropped_duplicates > 0)
      std::cerr << "dropped " << loaded.dropped_self_loops << " self-loops and "
                << loaded.dropped_duplicates << " duplicate edges\n";
    return std::make_shared<const lbcim::Graph>(std::move(loaded.graph));
  }
  std::map<std::string, double> kv;
  std::istringstream in(text.substr(colon + 1));
  for (std::string item; std::getline(in, item, ',');) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw UsageError("bad graph spec item '" + item + "'");
    kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  auto get = [&](const char *k) {
    if (!kv.count(k))
      throw UsageError(std::string("graph spec needs ") + k);
    return kv.at(k);
  };
  lbcim::GenParams p;
  if (model == "er")
    p = lbcim::ErParams{static_cast<int>(get("n")), get("p")};
  else if (model == "ba")
    p = lbcim::BaParams{static_cast<int>(get("n")), static_cast<int>(get("m"))};
  else
    p = lbcim::WsParams{static_cast<int>(get("n")), static_cast<int>(get("k")), get("p")};
  return std::make_shared<const lbcim::Graph>(lbcim::generate(p, seed));
}

void print_stats(const lbcim::TournamentStats &s) {
  std::cout << "games " << s.games() << "  black wins " << s.w << "  red wins " << s.l << "  draws "
            << s.d << '\n'
            << "win_rate " << s.win_rate << "  loss_rate " << s.loss_rate << "  draw_rate "
            << s.draw_rate << '\n';
}

void write_records(const lbcim::MatchResult &m, const std::string &out, const lbcim::PlotSeries &series) {
  if (out.empty())
    return;
  lbcim::emit_results(m.records, out, lbcim::format_for(out), &series);
  std::cout << "wrote " << out << " and " << lbcim::plot_path_for(out).string() << '\n';
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Loyalty-based competitive influence maximization simulator"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeFirst);

  // gen-graph
  auto *gen = app.add_subcommand("gen-graph", "generate a synthetic graph as an edge list");
  std::string model = "ws", gen_out;
  int gen_n = 50, gen_m = 2, gen_k = 4;
  double gen_p = 0.3;
  std::uint64_t seed = 1;
  gen->add_option("--model", model)->check(CLI::IsMember({"er", "ba", "ws"}));
  gen->add_option("--n", gen_n);
  gen->add_option("--p", gen_p);
  gen->add_option("--m", gen_m);
  gen->add_option("--k", gen_k);
  gen->add_option("--seed", seed);
  gen->add_option("--out", gen_out)->required();

  // play
  auto *play = app.add_subcommand("play", "play a single game and print the result");
  std::string graph_text, black_name = "eps-mcts", red_name = "mcts", starter = "black", trace_path;
  std::optional<int> budget;
  SearchFlags play_flags;
  play->add_option("--graph", graph_text, "edge-list file, model spec (ws:n=50,k=4,p=0.3) or sw|sf|er")
      ->required();
  play->add_option("--black", black_name)->check(CLI::IsMember(kStrategies));
  play->add_option("--red", red_name)->check(CLI::IsMember(kStrategies));
  play->add_option("--starter", starter)->check(CLI::IsMember({"black", "red"}));
  play->add_option("--budget", budget, "tokens per player (default: node count)");
  play->add_option("--seed", seed);
  play->add_option("--trace", trace_path, "write the move trace (.json or text)");
  play_flags.add_to(*play);

  // match / randomness share most flags
  std::string dataset_text = "sw", out;
  int games = 100, jobs = 0, graphs = 5, runs = 20, target_cluster = 198, sample = 100;
  SearchFlags match_flags;
  auto add_match_flags = [&](CLI::App *sub) {
    sub->add_option("--dataset", dataset_text, "sw, sf, er or file:<path>");
    sub->add_option("--black", black_name)->check(CLI::IsMember(kStrategies));
    sub->add_option("--red", red_name)->check(CLI::IsMember(kStrategies));
    sub->add_option("--budget", budget, "tokens per player (default: node count)");
    sub->add_option("--seed", seed);
    sub->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    sub->add_option("--out", out, "results file (.csv or .json)");
    sub->add_option("--target-cluster", target_cluster, "file datasets: preferred community size");
    sub->add_option("--sample", sample, "file datasets: nodes sampled from the community");
    match_flags.add_to(*sub);
  };
  auto *match = app.add_subcommand("match", "run a tournament between two strategies");
  add_match_flags(match);
  match->add_option("--games", games)->check(CLI::PositiveNumber);

  auto *randomness = app.add_subcommand("randomness", "repeat games on fixed graphs");
  add_match_flags(randomness);
  randomness->add_option("--graphs", graphs)->check(CLI::PositiveNumber);
  randomness->add_option("--runs", runs)->check(CLI::PositiveNumber);

  auto *tokens = app.add_subcommand("tokens-exp", "compare donation policies, MCTS vs MCTS");
  std::string formation = "fire-vs-one", rollout = "random";
  tokens->add_option("--formation", formation)
      ->check(CLI::IsMember({"fire-vs-one", "choose-vs-one", "fire-vs-choose"}));
  tokens->add_option("--dataset", dataset_text, "sw, sf, er or file:<path>");
  tokens->add_option("--games", games)->check(CLI::PositiveNumber);
  tokens->add_option("--budget", budget, "tokens per player (default: node count)");
  tokens->add_option("--seed", seed);
  tokens->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  tokens->add_option("--out", out, "results file (.csv or .json)");
  tokens->add_option("--rollout", rollout)->check(CLI::IsMember({"random", "eps-greedy"}));
  tokens->add_option("--target-cluster", target_cluster);
  tokens->add_option("--sample", sample);
  match_flags.add_to(*tokens);

  try {
    auto args = expand_config(argc, argv);
    args.insert(args.begin(), argv[0]);
    std::vector<const char *> cargs;
    for (const auto &a : args)
      cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const lbcim::DataError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }

  try {
    if (*gen) {
      lbcim::GenParams p;
      if (model == "er")
        p = lbcim::ErParams{gen_n, gen_p};
      else if (model == "ba")
        p = lbcim::BaParams{gen_n, gen_m};
      else
        p = lbcim::WsParams{gen_n, gen_k, gen_p};
      const auto g = lbcim::generate(p, seed);
      lbcim::write_edge_list(g, gen_out);
      std::cout << "wrote " << gen_out << ": " << g.node_count() << " nodes, " << g.edge_count()
                << " edges\n";
    } else if (*play) {
      const auto graph = graph_from_spec(graph_text, lbcim::derive_seed(seed, 0, "graph"));
      const auto bspec = play_flags.spec(black_name);
      const auto rspec = play_flags.spec(red_name);
      const auto black = lbcim::make_strategy(bspec);
      const auto red = lbcim::make_strategy(rspec);
      lbcim::GameConfig cfg;
      cfg.budget_black = budget;
      cfg.budget_red = budget;
      cfg.policy_black = policy_of(bspec);
      cfg.policy_red = policy_of(rspec);
      cfg.starter = lbcim::parse_color(starter);
      const auto result = lbcim::play_game(graph, cfg, *red, *black, seed);
      std::cout << "graph " << graph->node_count() << " nodes, " << graph->edge_count() << " edges\n"
                << "winner " << lbcim::to_string(result.outcome) << "  black " << result.black_nodes
                << "  red " << result.red_nodes << "  turns " << result.turns << '\n';
      if (!trace_path.empty()) {
        std::ofstream t(trace_path);
        if (!t)
          throw lbcim::DataError("cannot write '" + trace_path + "'");
        t << (trace_path.ends_with(".json") ? lbcim::trace_to_json(result)
                                             : lbcim::trace_to_text(result.trace));
      }
    } else if (*match || *randomness) {
      lbcim::ExperimentSpec spec;
      spec.dataset = lbcim::parse_dataset(dataset_text);
      spec.dataset.target_cluster = target_cluster;
      spec.dataset.sample = sample;
      spec.black = match_flags.spec(black_name);
      spec.red = match_flags.spec(red_name);
      spec.games = games;
      spec.budget = budget;
      spec.policy_black = policy_of(spec.black);
      spec.policy_red = policy_of(spec.red);
      spec.master_seed = seed;
      spec.jobs = jobs;
      const lbcim::PlotSeries series{black_name, red_name, lbcim::to_string(spec.dataset)};
      if (*match) {
        const auto m = lbcim::run_match(spec);
        print_stats(m.stats);
        write_records(m, out, series);
      } else {
        const auto table = lbcim::randomness_table(spec, graphs, runs);
        std::cout << "graph,n,m,red_wins_pct,black_wins_pct,draw_pct\n";
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
          const auto &r = table.rows[i];
          std::cout << i + 1 << ',' << r.graph_n << ',' << r.graph_m << ',' << r.red_pct << ','
                    << r.black_pct << ',' << r.draw_pct << '\n';
        }
        if (!out.empty())
          lbcim::emit_results(table.records, out, lbcim::format_for(out), &series);
      }
    } else if (*tokens) {
      auto dataset = lbcim::parse_dataset(dataset_text);
      dataset.target_cluster = target_cluster;
      dataset.sample = sample;
      auto mcts = match_flags.spec("mcts").mcts;
      mcts.rollout = rollout == "random" ? lbcim::RolloutMode::Random : lbcim::RolloutMode::EpsGreedy;
      const auto f = lbcim::parse_formation(formation);
      const auto m = lbcim::token_policy_experiment(f, dataset, games, seed, mcts, budget, jobs);
      const auto [bp, rp] = lbcim::formation_policies(f);
      std::cout << "formation " << formation << "  black " << lbcim::to_string(bp) << "  red "
                << lbcim::to_string(rp) << '\n';
      print_stats(m.stats);
      write_records(m, out,
                    {"mcts-" + lbcim::to_string(bp), "mcts-" + lbcim::to_string(rp),
                     lbcim::to_string(dataset)});
    }
  } catch (const lbcim::DataError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
