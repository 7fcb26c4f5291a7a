#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lbcim/random.hpp"

namespace lbcim {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

enum class NodeState : std::uint8_t { Inactive, Red, Black };

// Per-node gameboard values: threshold, red tokens, black tokens, state.
struct NodeAttrs {
  int theta = 0;
  int red_tokens = 0;
  int black_tokens = 0;
  NodeState state = NodeState::Inactive;

  int total_tokens() const { return red_tokens + black_tokens; }

  bool operator==(const NodeAttrs &) const = default;
};

// Raised for malformed input data (edge-list files, bad edges).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Simple undirected graph with the initial gameboard attributes.
//
// Adjacency is stored compressed (offsets + sorted neighbor ids). Once built
// a Graph is immutable; per-game mutable state lives in GameState.
class Graph {
public:
  Graph() = default;

  std::size_t node_count() const { return attrs_.size(); }
  std::size_t edge_count() const { return neighbors_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const;
  int degree(NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const;
  bool contains(NodeId v) const { return v >= 0 && static_cast<std::size_t>(v) < node_count(); }

  // Degree-0 nodes are never selectable and never counted for either player.
  bool eligible(NodeId v) const { return degree(v) > 0; }

  const NodeAttrs &initial_attrs(NodeId v) const { return attrs_.at(static_cast<std::size_t>(v)); }
  const std::vector<NodeAttrs> &initial_attrs() const { return attrs_; }

  // Id in the source data (identity for generated graphs).
  std::int64_t original_id(NodeId v) const { return original_ids_.at(static_cast<std::size_t>(v)); }
  const std::vector<std::int64_t> &original_ids() const { return original_ids_; }

  std::vector<Edge> edges() const;

private:
  friend Graph new_gameboard(std::size_t node_count, std::span<const Edge> edges);
  friend Graph with_original_ids(Graph g, std::vector<std::int64_t> ids);

  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<NodeAttrs> attrs_;
  std::vector<std::int64_t> original_ids_;
};

// Builds a fresh gameboard: every node inactive, no tokens, threshold equal
// to degree. Throws DataError on self-loops, duplicate edges or ids outside
// [0, node_count).
Graph new_gameboard(std::size_t node_count, std::span<const Edge> edges);

// Replaces the original-id side table (size must equal node_count).
Graph with_original_ids(Graph g, std::vector<std::int64_t> ids);

// Throws std::out_of_range for unknown nodes.
int degree(const Graph &g, NodeId v);

struct ErParams {
  int n = 0;
  double p = 0.0;
};
struct BaParams {
  int n = 0;
  int m = 1;
};
struct WsParams {
  int n = 0;
  int k = 2;
  double p = 0.0;
};
using GenParams = std::variant<ErParams, BaParams, WsParams>;

Graph generate_er(int n, double p, std::uint64_t seed);

// Star core of m+1 nodes, then each new node attaches m distinct targets by
// preferential attachment. Always m * (n - m) edges.
Graph generate_ba(int n, int m, std::uint64_t seed);

// Ring lattice with floor(k/2) neighbors per side, each lattice edge rewired
// with probability p. Rewiring keeps the edge count.
Graph generate_ws(int n, int k, double p, std::uint64_t seed);

Graph generate(const GenParams &params, std::uint64_t seed);

struct EdgeListLoad {
  Graph graph;
  std::size_t dropped_self_loops = 0;
  std::size_t dropped_duplicates = 0;
};

// SNAP-style "u v" lines, '#' comments. Ids are remapped to dense [0, n) in
// ascending order of the original id; the originals stay in the graph's
// side table. Throws DataError with the line number on malformed input.
EdgeListLoad load_edge_list(const std::filesystem::path &path);
EdgeListLoad parse_edge_list(const std::string &text);

void write_edge_list(const Graph &g, const std::filesystem::path &path);

struct Communities {
  std::vector<int> labels;
  bool converged = true;
  int rounds = 0;

  std::size_t community_count() const;
};

inline constexpr int kLabelPropagationRoundCap = 100;

// Asynchronous label propagation in seeded random order. A node keeps its
// label while that label is among the most frequent in its neighborhood,
// otherwise it moves to one of the most frequent labels at random.
Communities label_propagation(const Graph &g, std::uint64_t seed,
                              int round_cap = kLabelPropagationRoundCap);

// Picks the community (of size >= sample) whose size is closest to
// target_cluster, ties to the larger, and returns a breadth-first sample of
// `sample` nodes from a random start inside it as a fresh gameboard.
Graph extract_cluster_sample(const Graph &g, const Communities &communities, int target_cluster,
                             int sample, std::uint64_t seed);
Graph extract_cluster_sample(const Graph &g, int target_cluster, int sample, std::uint64_t seed);

// Subgraph induced by `nodes` (in the given order), re-thresholded.
Graph induced_subgraph(const Graph &g, std::span<const NodeId> nodes);

} // namespace lbcim
