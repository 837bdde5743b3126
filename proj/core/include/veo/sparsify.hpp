#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "veo/community.hpp"
#include "veo/graph.hpp"

namespace veo {

enum class PrunePolicy { random, degree_keep };

PrunePolicy parse_prune_policy(const std::string& name);
std::string to_string(PrunePolicy policy);

struct PruneReport {
  std::size_t nodes_before = 0;
  std::size_t nodes_selected = 0;
  std::size_t edges_before = 0;    // edges of the induced subgraph on the selection
  std::size_t edges_removed = 0;   // removed by the edge budget
  std::size_t isolated_removed = 0;
  std::size_t components_dropped = 0;
  std::size_t nodes_final = 0;
  std::size_t edges_final = 0;
  std::vector<std::size_t> clamped_communities;  // quota exceeded community size
};

/// Reduced graph plus the mapping back to the original.
struct SparsifiedGraph {
  Graph graph;
  /// `to_original[i]` is the original index of working node i.
  std::vector<NodeIndex> to_original;
  std::vector<std::size_t> quotas;
  /// Pre-prune selection (original indices), per community in selection order.
  std::vector<std::vector<NodeIndex>> selected;
  PruneReport report;
  bool reduced = false;
};

/// Per-community node quotas: ceil(|C_i| / total_nodes * n_target).
std::vector<std::size_t> community_quotas(const CommunityStructure& cs, std::size_t total_nodes,
                                          std::size_t n_target);

struct SparsifyOptions {
  std::size_t n_v = 50;
  std::size_t n_e = 100;
  PrunePolicy prune = PrunePolicy::random;
  std::uint64_t seed = 0;
  /// Relabel the working graph "0".."n-1" in ascending original label order.
  bool relabel = true;
};

/// Community-proportional, betweenness-ranked node selection followed by an
/// edge budget and largest-component extraction.
SparsifiedGraph sparsify(const Graph& g, const CommunityStructure& cs, const SparsifyOptions& options);

/// Sparsifies only when |V| > n_v and |E| > n_e; otherwise returns `g`
/// unchanged with an identity mapping.
SparsifiedGraph sparsify_if_large(const Graph& g, const CommunityStructure& cs, const SparsifyOptions& options);

/// Writes `<stem>.edges`, `<stem>.map` (`working original` lines) and
/// `<stem>.report.json`.
void write_sparsified(const Graph& original, const SparsifiedGraph& s, const std::filesystem::path& stem);

/// Betweenness rounded to 1e-6 so that exact ties are not split by
/// floating-point accumulation order.
std::vector<double> ranking_betweenness(const Graph& g);

}  // namespace veo
