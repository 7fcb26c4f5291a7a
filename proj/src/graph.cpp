#include "lbcim/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace lbcim {

namespace {

void check_node(const Graph &g, NodeId v) {
  if (!g.contains(v))
    throw std::out_of_range("unknown node " + std::to_string(v));
}

} // namespace

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  const auto i = static_cast<std::size_t>(v);
  return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

int Graph::degree(NodeId v) const {
  const auto i = static_cast<std::size_t>(v);
  return static_cast<int>(offsets_[i + 1] - offsets_[i]);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; static_cast<std::size_t>(u) < node_count(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v)
        out.emplace_back(u, v);
  return out;
}

Graph new_gameboard(std::size_t node_count, std::span<const Edge> edges) {
  std::vector<std::vector<NodeId>> adj(node_count);
  for (const auto &[u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= node_count ||
        static_cast<std::size_t>(v) >= node_count)
      throw DataError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") references a node outside [0, " + std::to_string(node_count) + ")");
    if (u == v)
      throw DataError("self-loop on node " + std::to_string(u));
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }

  Graph g;
  g.offsets_.assign(node_count + 1, 0);
  g.attrs_.resize(node_count);
  g.original_ids_.resize(node_count);
  std::iota(g.original_ids_.begin(), g.original_ids_.end(), std::int64_t{0});
  for (std::size_t v = 0; v < node_count; ++v) {
    auto &nb = adj[v];
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
      throw DataError("duplicate edge at node " + std::to_string(v));
    g.offsets_[v + 1] = g.offsets_[v] + nb.size();
    g.neighbors_.insert(g.neighbors_.end(), nb.begin(), nb.end());
    g.attrs_[v].theta = static_cast<int>(nb.size());
  }
  return g;
}

Graph with_original_ids(Graph g, std::vector<std::int64_t> ids) {
  if (ids.size() != g.node_count())
    throw std::invalid_argument("original id table size mismatch");
  g.original_ids_ = std::move(ids);
  return g;
}

int degree(const Graph &g, NodeId v) {
  check_node(g, v);
  return g.degree(v);
}

Graph generate_er(int n, double p, std::uint64_t seed) {
  if (n < 1)
    throw std::invalid_argument("ER: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("ER: p must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (bernoulli(rng, p))
        edges.emplace_back(u, v);
  return new_gameboard(static_cast<std::size_t>(n), edges);
}

Graph generate_ba(int n, int m, std::uint64_t seed) {
  if (m < 1 || m >= n)
    throw std::invalid_argument("BA: need 1 <= m < n");
  Rng rng(seed);
  std::vector<Edge> edges;
  // every edge endpoint once, so sampling from it is degree-proportional
  std::vector<NodeId> repeated;
  for (NodeId leaf = 1; leaf <= m; ++leaf) {
    edges.emplace_back(0, leaf);
    repeated.push_back(0);
    repeated.push_back(leaf);
  }
  std::vector<NodeId> targets;
  for (NodeId v = m + 1; v < n; ++v) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      const NodeId t = repeated[uniform_index(rng, repeated.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end())
        targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.emplace_back(t, v);
      repeated.push_back(t);
      repeated.push_back(v);
    }
  }
  return new_gameboard(static_cast<std::size_t>(n), edges);
}

Graph generate_ws(int n, int k, double p, std::uint64_t seed) {
  if (k < 1 || k >= n)
    throw std::invalid_argument("WS: need 1 <= k < n");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("WS: p must lie in [0, 1]");
  Rng rng(seed);
  const int half = k / 2;
  std::vector<std::set<NodeId>> adj(static_cast<std::size_t>(n));
  auto link = [&](NodeId a, NodeId b) {
    adj[static_cast<std::size_t>(a)].insert(b);
    adj[static_cast<std::size_t>(b)].insert(a);
  };
  for (NodeId u = 0; u < n; ++u)
    for (int j = 1; j <= half; ++j)
      link(u, (u + j) % n);

  for (int j = 1; j <= half; ++j) {
    for (NodeId u = 0; u < n; ++u) {
      const NodeId v = (u + j) % n;
      if (!bernoulli(rng, p))
        continue;
      auto &nu = adj[static_cast<std::size_t>(u)];
      if (static_cast<int>(nu.size()) >= n - 1)
        continue;
      NodeId w = 0;
      do {
        w = static_cast<NodeId>(uniform_index(rng, static_cast<std::size_t>(n)));
      } while (w == u || nu.count(w) != 0);
      nu.erase(v);
      adj[static_cast<std::size_t>(v)].erase(u);
      link(u, w);
    }
  }

  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : adj[static_cast<std::size_t>(u)])
      if (u < v)
        edges.emplace_back(u, v);
  return new_gameboard(static_cast<std::size_t>(n), edges);
}

Graph generate(const GenParams &params, std::uint64_t seed) {
  return std::visit(
      [seed](const auto &p) -> Graph {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ErParams>)
          return generate_er(p.n, p.p, seed);
        else if constexpr (std::is_same_v<T, BaParams>)
          return generate_ba(p.n, p.m, seed);
        else
          return generate_ws(p.n, p.k, p.p, seed);
      },
      params);
}

namespace {

bool parse_id(std::string_view tok, std::int64_t &out) {
  const auto *end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end && out >= 0;
}

} // namespace

EdgeListLoad parse_edge_list(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::set<std::int64_t> ids;
  EdgeListLoad result;

  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    std::int64_t u = 0, v = 0;
    if (!(ls >> a >> b) || (ls >> extra) || !parse_id(a, u) || !parse_id(b, v))
      throw DataError("malformed edge at line " + std::to_string(line_no) + ": '" + line + "'");
    ids.insert(u);
    ids.insert(v);
    if (u == v) {
      ++result.dropped_self_loops;
      continue;
    }
    raw.emplace_back(std::min(u, v), std::max(u, v));
  }

  std::vector<std::int64_t> originals(ids.begin(), ids.end());
  std::unordered_map<std::int64_t, NodeId> dense;
  dense.reserve(originals.size());
  for (std::size_t i = 0; i < originals.size(); ++i)
    dense.emplace(originals[i], static_cast<NodeId>(i));

  std::sort(raw.begin(), raw.end());
  const auto unique_end = std::unique(raw.begin(), raw.end());
  result.dropped_duplicates = static_cast<std::size_t>(raw.end() - unique_end);
  raw.erase(unique_end, raw.end());

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto &[u, v] : raw)
    edges.emplace_back(dense.at(u), dense.at(v));
  Graph g = new_gameboard(originals.size(), edges);
  result.graph = with_original_ids(std::move(g), std::move(originals));
  return result;
}

EdgeListLoad load_edge_list(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot read edge list '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str());
}

void write_edge_list(const Graph &g, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out)
    throw DataError("cannot write edge list '" + path.string() + "'");
  out << "# nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
  for (const auto &[u, v] : g.edges())
    out << g.original_id(u) << ' ' << g.original_id(v) << '\n';
  if (!out)
    throw DataError("write failed for '" + path.string() + "'");
}

std::size_t Communities::community_count() const {
  return std::set<int>(labels.begin(), labels.end()).size();
}

Communities label_propagation(const Graph &g, std::uint64_t seed, int round_cap) {
  const auto n = g.node_count();
  Communities out;
  out.labels.resize(n);
  std::iota(out.labels.begin(), out.labels.end(), 0);
  if (n == 0)
    return out;

  Rng rng(seed);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> counts(n, 0);
  std::vector<int> touched;
  std::vector<int> best;

  bool changed = true;
  while (changed && out.rounds < round_cap) {
    changed = false;
    ++out.rounds;
    for (std::size_t i = n - 1; i > 0; --i)
      std::swap(order[i], order[uniform_index(rng, i + 1)]);

    for (NodeId v : order) {
      const auto nb = g.neighbors(v);
      if (nb.empty())
        continue;
      touched.clear();
      int top = 0;
      for (NodeId u : nb) {
        const int lab = out.labels[static_cast<std::size_t>(u)];
        if (counts[static_cast<std::size_t>(lab)]++ == 0)
          touched.push_back(lab);
        top = std::max(top, counts[static_cast<std::size_t>(lab)]);
      }
      best.clear();
      for (int lab : touched)
        if (counts[static_cast<std::size_t>(lab)] == top)
          best.push_back(lab);
      const int current = out.labels[static_cast<std::size_t>(v)];
      const bool keep = counts[static_cast<std::size_t>(current)] == top;
      for (int lab : touched)
        counts[static_cast<std::size_t>(lab)] = 0;
      if (keep)
        continue;
      std::sort(best.begin(), best.end());
      out.labels[static_cast<std::size_t>(v)] = best[uniform_index(rng, best.size())];
      changed = true;
    }
  }
  out.converged = !changed;

  // dense relabel in order of first appearance
  std::unordered_map<int, int> remap;
  for (auto &lab : out.labels) {
    auto [it, inserted] = remap.emplace(lab, static_cast<int>(remap.size()));
    lab = it->second;
  }
  return out;
}

Graph induced_subgraph(const Graph &g, std::span<const NodeId> nodes) {
  std::unordered_map<NodeId, NodeId> local;
  std::vector<std::int64_t> originals;
  local.reserve(nodes.size());
  for (NodeId v : nodes) {
    check_node(g, v);
    if (!local.emplace(v, static_cast<NodeId>(local.size())).second)
      throw std::invalid_argument("induced_subgraph: repeated node " + std::to_string(v));
    originals.push_back(g.original_id(v));
  }
  std::vector<Edge> edges;
  for (NodeId v : nodes)
    for (NodeId u : g.neighbors(v))
      if (v < u)
        if (auto it = local.find(u); it != local.end())
          edges.emplace_back(local.at(v), it->second);
  return with_original_ids(new_gameboard(nodes.size(), edges), std::move(originals));
}

Graph extract_cluster_sample(const Graph &g, const Communities &communities, int target_cluster,
                             int sample, std::uint64_t seed) {
  if (sample < 1)
    throw std::invalid_argument("sample must be >= 1");
  std::map<int, std::vector<NodeId>> members;
  for (std::size_t v = 0; v < communities.labels.size(); ++v)
    members[communities.labels[v]].push_back(static_cast<NodeId>(v));

  const std::vector<NodeId> *chosen = nullptr;
  for (const auto &[label, nodes] : members) {
    const auto size = static_cast<long>(nodes.size());
    if (size < sample)
      continue;
    if (chosen == nullptr) {
      chosen = &nodes;
      continue;
    }
    const auto best = static_cast<long>(chosen->size());
    const long d = std::labs(size - target_cluster);
    const long bd = std::labs(best - target_cluster);
    if (d < bd || (d == bd && size > best))
      chosen = &nodes;
  }
  if (chosen == nullptr)
    throw DataError("no community with at least " + std::to_string(sample) + " nodes");

  Rng rng(seed);
  std::vector<char> in_community(g.node_count(), 0);
  for (NodeId v : *chosen)
    in_community[static_cast<std::size_t>(v)] = 1;

  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> picked;
  std::vector<NodeId> frontier;
  std::vector<NodeId> shuffled;
  while (static_cast<int>(picked.size()) < sample) {
    // (re)start inside the community; only needed again if it is disconnected
    std::vector<NodeId> unseen;
    for (NodeId v : *chosen)
      if (!seen[static_cast<std::size_t>(v)])
        unseen.push_back(v);
    const NodeId start = unseen[uniform_index(rng, unseen.size())];
    seen[static_cast<std::size_t>(start)] = 1;
    frontier.assign(1, start);
    for (std::size_t head = 0; head < frontier.size() && static_cast<int>(picked.size()) < sample;
         ++head) {
      const NodeId v = frontier[head];
      picked.push_back(v);
      const auto nb = g.neighbors(v);
      shuffled.assign(nb.begin(), nb.end());
      for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[uniform_index(rng, i)]);
      for (NodeId u : shuffled) {
        const auto ui = static_cast<std::size_t>(u);
        if (in_community[ui] && !seen[ui]) {
          seen[ui] = 1;
          frontier.push_back(u);
        }
      }
    }
  }
  return induced_subgraph(g, picked);
}

Graph extract_cluster_sample(const Graph &g, int target_cluster, int sample, std::uint64_t seed) {
  const auto communities = label_propagation(g, derive_seed(seed, 0, "lpa"));
  return extract_cluster_sample(g, communities, target_cluster, sample,
                                derive_seed(seed, 0, "bfs"));
}

} // namespace lbcim
