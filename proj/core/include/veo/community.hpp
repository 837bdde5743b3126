#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "veo/graph.hpp"

namespace veo {

/// Disjoint, covering partition of a graph's nodes into non-empty communities.
///
/// Stored canonically: members sorted, communities ordered by their smallest
/// member. Community index therefore orders by smallest member label, which
/// is the tie-break used by every merge rule.
class CommunityStructure {
 public:
  CommunityStructure() = default;

  /// Throws GraphError unless `sets` partitions `0..node_count-1`.
  static CommunityStructure from_sets(std::size_t node_count, std::vector<std::vector<NodeIndex>> sets);
  /// `assignment[v]` is an arbitrary community key for node v.
  static CommunityStructure from_assignment(std::span<const std::size_t> assignment);
  static CommunityStructure singletons(std::size_t node_count);

  std::size_t size() const noexcept { return communities_.size(); }
  std::size_t node_count() const noexcept { return assignment_.size(); }
  const std::vector<NodeIndex>& members(std::size_t c) const { return communities_[c]; }
  const std::vector<std::vector<NodeIndex>>& communities() const noexcept { return communities_; }
  std::size_t community_of(NodeIndex v) const { return assignment_[v]; }
  const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }

  /// Community `from` absorbed into `into`; result is re-canonicalized.
  CommunityStructure merged(std::size_t from, std::size_t into) const;

  friend bool operator==(const CommunityStructure&, const CommunityStructure&) = default;

 private:
  std::vector<std::vector<NodeIndex>> communities_;
  std::vector<std::size_t> assignment_;
};

/// Newman modularity. Throws GraphError when the graph has no edges.
double modularity(const Graph& g, const CommunityStructure& cs);

/// Agglomerative greedy modularity maximization (Clauset-Newman-Moore).
/// Merges the best pair until no adjacent communities remain and returns the
/// partition at the first modularity peak. Gains are compared exactly in
/// integer arithmetic; ties go to the smallest community-index pair.
CommunityStructure detect_fastgreedy(const Graph& g);

/// Number of edges between each community and community `c`.
std::vector<std::size_t> inter_community_edges(const Graph& g, const CommunityStructure& cs, std::size_t c);

/// Repeatedly folds the smallest community into the one it shares the most
/// edges with until `n_target` remain. A smallest community with no outside
/// edges goes into the smallest other community.
CommunityStructure merge_to_target(const Graph& g, const CommunityStructure& cs, std::size_t n_target);

/// Folds every community smaller than `fraction * |V|` into its best-connected
/// community among those meeting the threshold, smallest first.
CommunityStructure merge_small(const Graph& g, const CommunityStructure& cs, double fraction);

/// `label community_index` lines.
void write_communities(const Graph& g, const CommunityStructure& cs, std::ostream& out);
CommunityStructure read_communities(const Graph& g, std::istream& in);

}  // namespace veo
