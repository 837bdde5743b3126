#include "veo/community.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>

#include "veo/error.hpp"

namespace veo {

CommunityStructure CommunityStructure::from_sets(std::size_t node_count,
                                                 std::vector<std::vector<NodeIndex>> sets) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(node_count, kUnset);
  for (auto& s : sets) {
    if (s.empty()) throw GraphError("community structure contains an empty community");
    std::sort(s.begin(), s.end());
    for (NodeIndex v : s) {
      if (v >= node_count) throw GraphError("community member out of range");
      if (owner[v] != kUnset) throw GraphError("communities overlap at node index " + std::to_string(v));
      owner[v] = 0;
    }
  }
  if (std::find(owner.begin(), owner.end(), kUnset) != owner.end()) {
    throw GraphError("communities do not cover every node");
  }
  std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  CommunityStructure cs;
  cs.assignment_.assign(node_count, 0);
  for (std::size_t c = 0; c < sets.size(); ++c) {
    for (NodeIndex v : sets[c]) cs.assignment_[v] = c;
  }
  cs.communities_ = std::move(sets);
  return cs;
}

CommunityStructure CommunityStructure::from_assignment(std::span<const std::size_t> assignment) {
  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<std::vector<NodeIndex>> sets;
  for (NodeIndex v = 0; v < assignment.size(); ++v) {
    auto [it, inserted] = slot.try_emplace(assignment[v], sets.size());
    if (inserted) sets.emplace_back();
    sets[it->second].push_back(v);
  }
  return from_sets(assignment.size(), std::move(sets));
}

CommunityStructure CommunityStructure::singletons(std::size_t node_count) {
  std::vector<std::vector<NodeIndex>> sets(node_count);
  for (NodeIndex v = 0; v < node_count; ++v) sets[v] = {v};
  return from_sets(node_count, std::move(sets));
}

CommunityStructure CommunityStructure::merged(std::size_t from, std::size_t into) const {
  if (from == into || from >= size() || into >= size()) throw GraphError("invalid community merge");
  auto sets = communities_;
  sets[into].insert(sets[into].end(), sets[from].begin(), sets[from].end());
  sets.erase(sets.begin() + static_cast<std::ptrdiff_t>(from));
  return from_sets(node_count(), std::move(sets));
}

double modularity(const Graph& g, const CommunityStructure& cs) {
  if (g.edge_count() == 0) throw GraphError("modularity is undefined for a graph without edges");
  if (cs.node_count() != g.node_count()) throw GraphError("community structure does not match graph");
  const double m = static_cast<double>(g.edge_count());
  std::vector<double> internal(cs.size(), 0.0);
  std::vector<double> degree_sum(cs.size(), 0.0);
  for (NodeIndex u = 0; u < g.node_count(); ++u) {
    const auto cu = cs.community_of(u);
    degree_sum[cu] += static_cast<double>(g.degree(u));
    for (NodeIndex v : g.neighbors(u)) {
      if (u < v && cs.community_of(v) == cu) internal[cu] += 1.0;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < cs.size(); ++c) {
    const double a = degree_sum[c] / (2.0 * m);
    q += internal[c] / m - a * a;
  }
  return q;
}

CommunityStructure detect_fastgreedy(const Graph& g) {
  const std::size_t n = g.node_count();
  if (g.edge_count() == 0) return CommunityStructure::singletons(n);
  const std::int64_t two_m = 2 * static_cast<std::int64_t>(g.edge_count());

  // Community ids are the smallest member index; a merge keeps the smaller id.
  std::vector<std::map<NodeIndex, std::int64_t>> links(n);
  std::vector<std::int64_t> degree_sum(n);
  for (NodeIndex u = 0; u < n; ++u) {
    degree_sum[u] = static_cast<std::int64_t>(g.degree(u));
    for (NodeIndex v : g.neighbors(u)) links[u][v] = 1;
  }
  // Modularity gain of merging i and j, scaled by 2m^2: 2m*L_ij - D_i*D_j.
  auto gain = [&](NodeIndex i, NodeIndex j) { return two_m * links[i].at(j) - degree_sum[i] * degree_sum[j]; };
  using Entry = std::tuple<std::int64_t, NodeIndex, NodeIndex>;  // (-gain, i, j), i < j
  std::set<Entry> queue;
  auto entry = [&](NodeIndex a, NodeIndex b) {
    const NodeIndex i = std::min(a, b);
    const NodeIndex j = std::max(a, b);
    return Entry{-gain(i, j), i, j};
  };
  for (NodeIndex u = 0; u < n; ++u) {
    for (const auto& [v, count] : links[u]) {
      if (u < v) queue.insert(entry(u, v));
    }
  }

  std::vector<std::pair<NodeIndex, NodeIndex>> merges;
  std::int64_t cumulative = 0;
  std::int64_t best = 0;
  std::size_t best_step = 0;
  while (!queue.empty()) {
    const auto [neg_gain, i, j] = *queue.begin();
    for (const auto& [k, count] : links[i]) queue.erase(entry(i, k));
    for (const auto& [k, count] : links[j]) {
      if (k != i) queue.erase(entry(j, k));
    }
    for (const auto& [k, count] : links[j]) {
      if (k == i) continue;
      links[i][k] += count;
      links[k][i] += count;
      links[k].erase(j);
    }
    links[i].erase(j);
    links[j].clear();
    degree_sum[i] += degree_sum[j];
    for (const auto& [k, count] : links[i]) queue.insert(entry(i, k));

    merges.emplace_back(i, j);
    cumulative += -neg_gain;
    if (cumulative > best) {
      best = cumulative;
      best_step = merges.size();
    }
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t s = 0; s < best_step; ++s) parent[root(merges[s].second)] = root(merges[s].first);
  std::vector<std::size_t> assignment(n);
  for (std::size_t v = 0; v < n; ++v) assignment[v] = root(v);
  return CommunityStructure::from_assignment(assignment);
}

std::vector<std::size_t> inter_community_edges(const Graph& g, const CommunityStructure& cs, std::size_t c) {
  std::vector<std::size_t> count(cs.size(), 0);
  for (NodeIndex u : cs.members(c)) {
    for (NodeIndex v : g.neighbors(u)) {
      const auto cv = cs.community_of(v);
      if (cv != c) ++count[cv];
    }
  }
  return count;
}

namespace {

std::size_t smallest_community(const CommunityStructure& cs, const std::vector<char>& eligible) {
  std::size_t best = cs.size();
  for (std::size_t c = 0; c < cs.size(); ++c) {
    if (!eligible[c]) continue;
    if (best == cs.size() || cs.members(c).size() < cs.members(best).size()) best = c;
  }
  return best;
}

// Best-connected target among `allowed`; falls back to the smallest allowed
// community when there are no edges to any of them.
std::size_t closest_community(const Graph& g, const CommunityStructure& cs, std::size_t from,
                              const std::vector<char>& allowed) {
  const auto edges = inter_community_edges(g, cs, from);
  std::size_t best = cs.size();
  for (std::size_t c = 0; c < cs.size(); ++c) {
    if (c == from || !allowed[c]) continue;
    if (best == cs.size() || edges[c] > edges[best]) best = c;
  }
  if (best != cs.size() && edges[best] > 0) return best;
  std::vector<char> others = allowed;
  others[from] = 0;
  return smallest_community(cs, others);
}

}  // namespace

CommunityStructure merge_to_target(const Graph& g, const CommunityStructure& cs, std::size_t n_target) {
  if (n_target == 0) throw ConfigError("target community count must be at least 1");
  if (n_target > cs.size()) {
    throw ConfigError("target community count " + std::to_string(n_target) + " exceeds current count " +
                      std::to_string(cs.size()));
  }
  CommunityStructure current = cs;
  while (current.size() > n_target) {
    const std::vector<char> all(current.size(), 1);
    const auto from = smallest_community(current, all);
    const auto into = closest_community(g, current, from, all);
    current = current.merged(from, into);
  }
  return current;
}

CommunityStructure merge_small(const Graph& g, const CommunityStructure& cs, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("small-community fraction must lie in (0, 1)");
  const double threshold = fraction * static_cast<double>(cs.node_count());
  CommunityStructure current = cs;
  for (;;) {
    std::vector<char> small(current.size()), large(current.size());
    bool any_small = false, any_large = false;
    for (std::size_t c = 0; c < current.size(); ++c) {
      const bool undersized = static_cast<double>(current.members(c).size()) < threshold;
      small[c] = undersized;
      large[c] = !undersized;
      any_small |= undersized;
      any_large |= !undersized;
    }
    if (!any_small || !any_large) return current;
    const auto from = smallest_community(current, small);
    const auto into = closest_community(g, current, from, large);
    current = current.merged(from, into);
  }
}

void write_communities(const Graph& g, const CommunityStructure& cs, std::ostream& out) {
  for (NodeIndex v = 0; v < g.node_count(); ++v) out << g.label(v) << ' ' << cs.community_of(v) << '\n';
}

CommunityStructure read_communities(const Graph& g, std::istream& in) {
  std::vector<std::size_t> assignment(g.node_count(), static_cast<std::size_t>(-1));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream tokens(line);
    std::string label;
    std::size_t community = 0;
    if (!(tokens >> label >> community)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'label community_index'", line_no, line);
    }
    assignment[g.index_of(label)] = community;
  }
  for (NodeIndex v = 0; v < assignment.size(); ++v) {
    if (assignment[v] == static_cast<std::size_t>(-1)) {
      throw GraphError("node '" + g.label(v) + "' has no community assignment");
    }
  }
  return CommunityStructure::from_assignment(assignment);
}

}  // namespace veo
