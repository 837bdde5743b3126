#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace veo {

/// Dense internal node index. Indices are assigned in ascending label order,
/// so comparing indices is the same as comparing labels.
using NodeIndex = std::uint32_t;
using Edge = std::pair<NodeIndex, NodeIndex>;

/// Total order on node labels. Labels made only of digits compare by numeric
/// value and sort before any other label; everything else is lexicographic.
bool label_less(std::string_view a, std::string_view b);

/// Undirected simple graph with stable labels.
///
/// Immutable once built. Neighbor lists are sorted by index, so every
/// iteration order in the library is deterministic.
class Graph {
 public:
  Graph() = default;

  /// `labels` must be strictly increasing under `label_less`. Edges may come
  /// in any order; duplicates and self-loops are rejected.
  Graph(std::vector<std::string> labels, std::span<const Edge> edges);

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool empty() const noexcept { return labels_.empty(); }

  std::span<const NodeIndex> neighbors(NodeIndex v) const { return adjacency_[v]; }
  std::size_t degree(NodeIndex v) const { return adjacency_[v].size(); }
  bool has_edge(NodeIndex u, NodeIndex v) const;

  const std::string& label(NodeIndex v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<NodeIndex> find(std::string_view label) const;
  /// Throws GraphError naming the label when it is not a node of the graph.
  NodeIndex index_of(std::string_view label) const;

  /// All edges as (u, v) with u < v, sorted.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<NodeIndex>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Accumulates labelled edges, dropping self-loops and duplicates.
class GraphBuilder {
 public:
  /// Returns false when the edge was dropped.
  bool add_edge(std::string_view a, std::string_view b);
  void add_node(std::string_view label);

  std::size_t self_loops() const noexcept { return self_loops_; }
  std::size_t duplicates() const noexcept { return duplicates_; }

  Graph build() const;

 private:
  std::size_t intern(std::string_view label);

  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::unordered_set<std::uint64_t> seen_;
  std::size_t self_loops_ = 0;
  std::size_t duplicates_ = 0;
};

struct LoadReport {
  std::size_t edge_lines = 0;
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;
};

struct LoadedGraph {
  Graph graph;
  LoadReport report;
};

/// Reads a whitespace separated edge list. Lines starting with `#` or `%`
/// are comments. Throws ParseError (with line number) on a line that does not
/// hold exactly two tokens, and on input with no edges.
LoadedGraph load_edge_list(std::istream& in);
LoadedGraph load_edge_list(const std::filesystem::path& path);

/// Writes one `u v` line per edge in index order. Isolated nodes are not
/// representable in this format and are omitted.
void write_edge_list(const Graph& g, std::ostream& out);

/// Induced subgraph on `keep` (indices of `g`); labels are preserved.
Graph induced_subgraph(const Graph& g, std::span<const NodeIndex> keep);
/// Label-based overload. Throws GraphError naming the first unknown label.
Graph induced_subgraph(const Graph& g, std::span<const std::string> keep);

/// Connected components, each sorted, ordered by smallest member.
std::vector<std::vector<NodeIndex>> connected_components(const Graph& g);
bool is_connected(const Graph& g);

/// Members of the largest component; ties go to the component holding the
/// smallest label. Throws GraphError on an empty graph.
std::vector<NodeIndex> largest_component_nodes(const Graph& g);
Graph largest_component(const Graph& g);

/// Hop distances from `source`; unreachable nodes get -1.
std::vector<int> bfs_distances(const Graph& g, NodeIndex source);

/// Exact unnormalized betweenness centrality, each unordered pair counted once.
std::vector<double> betweenness(const Graph& g);

/// Median of the degree sequence (mean of the two middle values for even n).
double median_degree(const Graph& g);

/// Node indices sorted by descending score, ties by ascending index.
std::vector<NodeIndex> rank_descending(std::span<const double> score);
std::vector<double> degrees_as_scores(const Graph& g);

}  // namespace veo
