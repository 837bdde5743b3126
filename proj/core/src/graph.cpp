#include "veo/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "veo/error.hpp"

namespace veo {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view strip_leading_zeros(std::string_view s) {
  const auto pos = s.find_first_not_of('0');
  return pos == std::string_view::npos ? s.substr(s.size() - 1) : s.substr(pos);
}

}  // namespace

bool label_less(std::string_view a, std::string_view b) {
  const bool na = all_digits(a);
  const bool nb = all_digits(b);
  if (na != nb) return na;
  if (na) {
    const auto sa = strip_leading_zeros(a);
    const auto sb = strip_leading_zeros(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

Graph::Graph(std::vector<std::string> labels, std::span<const Edge> edges)
    : labels_(std::move(labels)), adjacency_(labels_.size()) {
  for (std::size_t i = 1; i < labels_.size(); ++i) {
    if (!label_less(labels_[i - 1], labels_[i])) {
      throw GraphError("graph labels must be unique and sorted; offending label '" + labels_[i] + "'");
    }
  }
  for (const auto& [u, v] : edges) {
    if (u >= labels_.size() || v >= labels_.size()) throw GraphError("edge endpoint out of range");
    if (u == v) throw GraphError("self-loop on node '" + labels_[u] + "'");
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  std::size_t total = 0;
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) {
      throw GraphError("duplicate edge in graph construction");
    }
    total += nbrs.size();
  }
  edge_count_ = total / 2;
}

bool Graph::has_edge(NodeIndex u, NodeIndex v) const {
  const auto& nbrs = adjacency_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::optional<NodeIndex> Graph::find(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label,
                             [](const std::string& l, std::string_view x) { return label_less(l, x); });
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<NodeIndex>(it - labels_.begin());
}

NodeIndex Graph::index_of(std::string_view label) const {
  if (auto idx = find(label)) return *idx;
  throw GraphError("unknown node '" + std::string(label) + "'");
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeIndex u = 0; u < adjacency_.size(); ++u) {
    for (NodeIndex v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::size_t GraphBuilder::intern(std::string_view label) {
  auto [it, inserted] = ids_.try_emplace(std::string(label), labels_.size());
  if (inserted) labels_.emplace_back(label);
  return it->second;
}

void GraphBuilder::add_node(std::string_view label) { intern(label); }

bool GraphBuilder::add_edge(std::string_view a, std::string_view b) {
  const auto u = intern(a);
  const auto v = intern(b);
  if (u == v) {
    ++self_loops_;
    return false;
  }
  const auto key = (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
  if (!seen_.insert(key).second) {
    ++duplicates_;
    return false;
  }
  edges_.emplace_back(u, v);
  return true;
}

Graph GraphBuilder::build() const {
  std::vector<std::size_t> order(labels_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return label_less(labels_[a], labels_[b]); });
  std::vector<NodeIndex> rank(labels_.size());
  std::vector<std::string> sorted;
  sorted.reserve(labels_.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank[order[i]] = static_cast<NodeIndex>(i);
    sorted.push_back(labels_[order[i]]);
  }
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const auto& [u, v] : edges_) edges.emplace_back(rank[u], rank[v]);
  return Graph(std::move(sorted), edges);
}

LoadedGraph load_edge_list(std::istream& in) {
  GraphBuilder builder;
  LoadReport report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::vector<std::string> parts;
    for (std::string t; tokens >> t;) parts.push_back(std::move(t));
    if (parts.empty() || parts.front().front() == '%') continue;
    if (parts.size() != 2) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 2 tokens, found " +
                           std::to_string(parts.size()),
                       line_no, line);
    }
    ++report.edge_lines;
    builder.add_edge(parts[0], parts[1]);
  }
  if (report.edge_lines == 0) throw ParseError("edge list is empty");
  report.duplicate_edges = builder.duplicates();
  report.self_loops = builder.self_loops();
  return {builder.build(), report};
}

LoadedGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path.string() + "'");
  return load_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (const auto& [u, v] : g.edges()) out << g.label(u) << ' ' << g.label(v) << '\n';
}

Graph induced_subgraph(const Graph& g, std::span<const NodeIndex> keep) {
  std::vector<NodeIndex> nodes(keep.begin(), keep.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  constexpr NodeIndex kAbsent = static_cast<NodeIndex>(-1);
  std::vector<NodeIndex> remap(g.node_count(), kAbsent);
  std::vector<std::string> labels;
  labels.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= g.node_count()) throw GraphError("node index out of range in induced_subgraph");
    remap[nodes[i]] = static_cast<NodeIndex>(i);
    labels.push_back(g.label(nodes[i]));
  }
  std::vector<Edge> edges;
  for (NodeIndex u : nodes) {
    for (NodeIndex v : g.neighbors(u)) {
      if (u < v && remap[v] != kAbsent) edges.emplace_back(remap[u], remap[v]);
    }
  }
  return Graph(std::move(labels), edges);
}

Graph induced_subgraph(const Graph& g, std::span<const std::string> keep) {
  std::vector<NodeIndex> nodes;
  nodes.reserve(keep.size());
  for (const auto& label : keep) nodes.push_back(g.index_of(label));
  return induced_subgraph(g, nodes);
}

std::vector<std::vector<NodeIndex>> connected_components(const Graph& g) {
  std::vector<std::vector<NodeIndex>> out;
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeIndex> stack;
  for (NodeIndex s = 0; s < g.node_count(); ++s) {
    if (seen[s]) continue;
    std::vector<NodeIndex> comp;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeIndex u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (NodeIndex v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool is_connected(const Graph& g) { return connected_components(g).size() <= 1; }

std::vector<NodeIndex> largest_component_nodes(const Graph& g) {
  if (g.empty()) throw GraphError("largest_component of an empty graph");
  auto comps = connected_components(g);
  // Components come ordered by smallest member, so the first maximum wins ties.
  auto best = std::max_element(comps.begin(), comps.end(),
                               [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return std::move(*best);
}

Graph largest_component(const Graph& g) {
  const auto nodes = largest_component_nodes(g);
  if (nodes.size() == g.node_count()) return g;
  return induced_subgraph(g, nodes);
}

std::vector<int> bfs_distances(const Graph& g, NodeIndex source) {
  std::vector<int> dist(g.node_count(), -1);
  std::vector<NodeIndex> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeIndex u = queue[head];
    for (NodeIndex v : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<double> betweenness(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> centrality(n, 0.0);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<int> dist(n);
  std::vector<NodeIndex> order;
  order.reserve(n);
  for (NodeIndex s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeIndex u = order[head];
      for (NodeIndex v : g.neighbors(u)) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          order.push_back(v);
        }
        if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
      }
    }
    // Predecessors are recovered from distances instead of stored lists.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeIndex w = *it;
      for (NodeIndex v : g.neighbors(w)) {
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) centrality[w] += delta[w];
    }
  }
  for (double& c : centrality) c /= 2.0;
  return centrality;
}

double median_degree(const Graph& g) {
  if (g.empty()) return 0.0;
  std::vector<std::size_t> deg(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) deg[v] = g.degree(v);
  std::sort(deg.begin(), deg.end());
  const std::size_t n = deg.size();
  if (n % 2 == 1) return static_cast<double>(deg[n / 2]);
  return 0.5 * static_cast<double>(deg[n / 2 - 1] + deg[n / 2]);
}

std::vector<NodeIndex> rank_descending(std::span<const double> score) {
  std::vector<NodeIndex> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) { return score[a] > score[b]; });
  return order;
}

std::vector<double> degrees_as_scores(const Graph& g) {
  std::vector<double> out(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) out[v] = static_cast<double>(g.degree(v));
  return out;
}

}  // namespace veo
