#pragma once

// Seeded synthetic graphs for tests. Labels are "0".."n-1", so node index
// equals the integer label.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "veo/graph.hpp"

namespace veo::testgen {

inline Graph make_graph(std::size_t n, std::vector<Edge> edges) {
  std::set<Edge> uniq;
  for (auto [u, v] : edges) {
    if (u == v) continue;
    uniq.insert({std::min(u, v), std::max(u, v)});
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  std::vector<Edge> list(uniq.begin(), uniq.end());
  return Graph(std::move(labels), list);
}

inline Graph erdos_renyi(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeIndex u = 0; u < n; ++u) {
    for (NodeIndex v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v});
    }
  }
  return make_graph(n, edges);
}

/// Random spanning tree plus G(n, p) extras.
inline Graph connected_random(std::size_t n, double p, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  for (NodeIndex v = 1; v < n; ++v) {
    std::uniform_int_distribution<NodeIndex> pick(0, v - 1);
    edges.push_back({pick(rng), v});
  }
  std::bernoulli_distribution coin(p);
  for (NodeIndex u = 0; u < n; ++u) {
    for (NodeIndex v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v});
    }
  }
  return make_graph(n, edges);
}

/// Preferential attachment, `m` edges per new node, seeded by an m+1 clique.
inline std::vector<Edge> barabasi_albert_edges(std::size_t n, std::size_t m, std::mt19937_64& rng,
                                               NodeIndex offset = 0) {
  std::vector<Edge> edges;
  std::vector<NodeIndex> ends;
  for (NodeIndex u = 0; u <= m; ++u) {
    for (NodeIndex v = u + 1; v <= m; ++v) {
      edges.push_back({offset + u, offset + v});
      ends.push_back(offset + u);
      ends.push_back(offset + v);
    }
  }
  for (NodeIndex v = static_cast<NodeIndex>(m + 1); v < n; ++v) {
    std::set<NodeIndex> targets;
    while (targets.size() < m) {
      std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
      targets.insert(ends[pick(rng)]);
    }
    for (NodeIndex t : targets) {
      edges.push_back({t, offset + v});
      ends.push_back(t);
      ends.push_back(offset + v);
    }
  }
  return edges;
}

inline Graph barabasi_albert(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  return make_graph(n, barabasi_albert_edges(n, m, rng));
}

/// Two scale-free halves joined by `links` random cross edges.
inline Graph two_community_scale_free(std::size_t n, std::size_t m, std::size_t links, std::mt19937_64& rng) {
  const std::size_t half = n / 2;
  auto edges = barabasi_albert_edges(half, m, rng);
  const auto right = barabasi_albert_edges(n - half, m, rng, static_cast<NodeIndex>(half));
  edges.insert(edges.end(), right.begin(), right.end());
  std::uniform_int_distribution<NodeIndex> a(0, static_cast<NodeIndex>(half - 1));
  std::uniform_int_distribution<NodeIndex> b(static_cast<NodeIndex>(half), static_cast<NodeIndex>(n - 1));
  for (std::size_t i = 0; i < links; ++i) edges.push_back({a(rng), b(rng)});
  return make_graph(n, edges);
}

/// Communities of the given sizes; each is a random tree plus G(p_in)
/// edges, with G(p_out) edges between communities and one chain edge
/// between consecutive communities so the whole graph is connected.
inline Graph planted_partition(const std::vector<std::size_t>& sizes, double p_in, double p_out,
                               std::mt19937_64& rng) {
  std::vector<NodeIndex> start{0};
  for (auto s : sizes) start.push_back(start.back() + static_cast<NodeIndex>(s));
  const std::size_t n = start.back();
  std::vector<std::size_t> block(n);
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    for (NodeIndex v = start[c]; v < start[c + 1]; ++v) block[v] = c;
  }
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    for (NodeIndex v = start[c] + 1; v < start[c + 1]; ++v) {
      std::uniform_int_distribution<NodeIndex> pick(start[c], v - 1);
      edges.push_back({pick(rng), v});
    }
    if (c > 0) edges.push_back({start[c - 1], start[c]});
  }
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (NodeIndex u = 0; u < n; ++u) {
    for (NodeIndex v = u + 1; v < n; ++v) {
      if (u01(rng) < (block[u] == block[v] ? p_in : p_out)) edges.push_back({u, v});
    }
  }
  return make_graph(n, edges);
}

/// Two dense clusters with no direct edges between them, joined only through
/// `bridges` extra nodes, each wired to `fan` nodes on both sides. Bridge
/// labels are the last `bridges` indices.
struct BridgedClusters {
  Graph graph;
  std::vector<NodeIndex> bridges;
};

inline BridgedClusters bridged_clusters(std::size_t cluster_size, double p_in, std::size_t bridges, std::size_t fan,
                                        std::mt19937_64& rng) {
  std::vector<Edge> edges;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (std::size_t c = 0; c < 2; ++c) {
    const auto base = static_cast<NodeIndex>(c * cluster_size);
    for (NodeIndex v = 1; v < cluster_size; ++v) {
      std::uniform_int_distribution<NodeIndex> pick(0, v - 1);
      edges.push_back({base + pick(rng), base + v});
    }
    for (NodeIndex u = 0; u < cluster_size; ++u) {
      for (NodeIndex v = u + 1; v < cluster_size; ++v) {
        if (u01(rng) < p_in) edges.push_back({base + u, base + v});
      }
    }
  }
  BridgedClusters out;
  std::vector<NodeIndex> side(cluster_size);
  for (std::size_t b = 0; b < bridges; ++b) {
    const auto id = static_cast<NodeIndex>(2 * cluster_size + b);
    out.bridges.push_back(id);
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t i = 0; i < cluster_size; ++i) side[i] = static_cast<NodeIndex>(c * cluster_size + i);
      std::shuffle(side.begin(), side.end(), rng);
      for (std::size_t i = 0; i < fan; ++i) edges.push_back({side[i], id});
    }
  }
  out.graph = make_graph(2 * cluster_size + bridges, edges);
  return out;
}

}  // namespace veo::testgen

namespace veo::testgen {

inline std::vector<std::vector<char>> to_matrix(const Graph& g) {
  std::vector<std::vector<char>> adj(g.node_count(), std::vector<char>(g.node_count(), 0));
  for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
  return adj;
}

}  // namespace veo::testgen
