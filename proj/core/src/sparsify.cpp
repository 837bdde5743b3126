#include "veo/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "json.hpp"

#include "veo/error.hpp"

namespace veo {

PrunePolicy parse_prune_policy(const std::string& name) {
  if (name == "random") return PrunePolicy::random;
  if (name == "degree_keep") return PrunePolicy::degree_keep;
  throw ConfigError("unknown prune policy '" + name + "' (expected random or degree_keep)");
}

std::string to_string(PrunePolicy policy) {
  return policy == PrunePolicy::random ? "random" : "degree_keep";
}

std::vector<double> ranking_betweenness(const Graph& g) {
  auto b = betweenness(g);
  for (double& x : b) x = std::round(x * 1e6) / 1e6;
  return b;
}

std::vector<std::size_t> community_quotas(const CommunityStructure& cs, std::size_t total_nodes,
                                          std::size_t n_target) {
  if (cs.size() == 0) throw GraphError("community structure is empty");
  if (n_target == 0) throw ConfigError("target node count must be at least 1");
  if (total_nodes == 0) throw GraphError("total node count must be positive");
  std::vector<std::size_t> quotas;
  quotas.reserve(cs.size());
  for (const auto& members : cs.communities()) {
    quotas.push_back((members.size() * n_target + total_nodes - 1) / total_nodes);
  }
  return quotas;
}

namespace {

SparsifiedGraph wrap(const Graph& working, std::vector<NodeIndex> to_original, bool relabel) {
  SparsifiedGraph out;
  out.to_original = std::move(to_original);
  if (!relabel) {
    out.graph = working;
    return out;
  }
  std::vector<std::string> labels(working.node_count());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = std::to_string(i);
  const auto edges = working.edges();
  out.graph = Graph(std::move(labels), edges);
  return out;
}

}  // namespace

SparsifiedGraph sparsify(const Graph& g, const CommunityStructure& cs, const SparsifyOptions& options) {
  if (options.n_v == 0 || options.n_e == 0) throw ConfigError("sparsification targets must be at least 1");
  if (cs.node_count() != g.node_count()) throw GraphError("community structure does not match graph");

  PruneReport report;
  report.nodes_before = g.node_count();
  auto quotas = community_quotas(cs, g.node_count(), options.n_v);
  for (std::size_t c = 0; c < quotas.size(); ++c) {
    if (quotas[c] > cs.members(c).size()) {
      quotas[c] = cs.members(c).size();
      report.clamped_communities.push_back(c);
    }
  }

  // Betweenness is global: computed once on the full graph, ranked per community.
  const auto score = ranking_betweenness(g);
  std::vector<std::vector<NodeIndex>> selected(cs.size());
  std::vector<NodeIndex> keep;
  for (std::size_t c = 0; c < cs.size(); ++c) {
    auto members = cs.members(c);
    std::stable_sort(members.begin(), members.end(), [&](NodeIndex a, NodeIndex b) { return score[a] > score[b]; });
    members.resize(quotas[c]);
    keep.insert(keep.end(), members.begin(), members.end());
    selected[c] = std::move(members);
  }
  std::sort(keep.begin(), keep.end());
  report.nodes_selected = keep.size();

  const Graph induced = induced_subgraph(g, keep);
  auto edges = induced.edges();
  report.edges_before = edges.size();
  if (edges.size() > options.n_e) {
    const std::size_t excess = edges.size() - options.n_e;
    if (options.prune == PrunePolicy::random) {
      std::mt19937_64 rng(options.seed);
      std::shuffle(edges.begin(), edges.end(), rng);
      edges.erase(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(excess));
      std::sort(edges.begin(), edges.end());
    } else {
      auto weight = [&](const Edge& e) { return induced.degree(e.first) + induced.degree(e.second); };
      std::stable_sort(edges.begin(), edges.end(),
                       [&](const Edge& a, const Edge& b) { return weight(a) < weight(b); });
      edges.erase(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(excess));
      std::sort(edges.begin(), edges.end());
    }
    report.edges_removed = excess;
  }
  const Graph pruned(induced.labels(), edges);

  std::vector<NodeIndex> non_isolated;
  for (NodeIndex v = 0; v < pruned.node_count(); ++v) {
    if (pruned.degree(v) > 0) non_isolated.push_back(v);
  }
  report.isolated_removed = pruned.node_count() - non_isolated.size();

  std::vector<NodeIndex> final_nodes;  // indices into `pruned`
  if (non_isolated.empty()) {
    final_nodes = largest_component_nodes(pruned);
  } else {
    const Graph trimmed = induced_subgraph(pruned, non_isolated);
    const auto comps = connected_components(trimmed);
    report.components_dropped = comps.size() - 1;
    for (NodeIndex v : largest_component_nodes(trimmed)) final_nodes.push_back(non_isolated[v]);
  }
  const Graph working = induced_subgraph(pruned, final_nodes);

  // pruned/induced share the index space of `keep`.
  std::vector<NodeIndex> to_original;
  to_original.reserve(final_nodes.size());
  for (NodeIndex v : final_nodes) to_original.push_back(keep[v]);

  auto out = wrap(working, std::move(to_original), options.relabel);
  report.nodes_final = out.graph.node_count();
  report.edges_final = out.graph.edge_count();
  out.quotas = std::move(quotas);
  out.selected = std::move(selected);
  out.report = std::move(report);
  out.reduced = true;
  return out;
}

SparsifiedGraph sparsify_if_large(const Graph& g, const CommunityStructure& cs, const SparsifyOptions& options) {
  if (g.node_count() > options.n_v && g.edge_count() > options.n_e) return sparsify(g, cs, options);
  SparsifiedGraph out;
  out.graph = g;
  out.to_original.resize(g.node_count());
  std::iota(out.to_original.begin(), out.to_original.end(), 0);
  for (const auto& members : cs.communities()) out.quotas.push_back(members.size());
  out.selected = cs.communities();
  out.report.nodes_before = out.report.nodes_selected = out.report.nodes_final = g.node_count();
  out.report.edges_before = out.report.edges_final = g.edge_count();
  return out;
}

void write_sparsified(const Graph& original, const SparsifiedGraph& s, const std::filesystem::path& stem) {
  auto with_suffix = [&](const char* suffix) { return std::filesystem::path(stem.string() + suffix); };
  {
    std::ofstream out(with_suffix(".edges"));
    if (!out) throw Error("cannot write '" + with_suffix(".edges").string() + "'");
    write_edge_list(s.graph, out);
  }
  {
    std::ofstream out(with_suffix(".map"));
    for (NodeIndex v = 0; v < s.graph.node_count(); ++v) {
      out << s.graph.label(v) << ' ' << original.label(s.to_original[v]) << '\n';
    }
  }
  nlohmann::ordered_json j;
  j["reduced"] = s.reduced;
  j["nodes_before"] = s.report.nodes_before;
  j["nodes_selected"] = s.report.nodes_selected;
  j["edges_before"] = s.report.edges_before;
  j["edges_removed"] = s.report.edges_removed;
  j["isolated_removed"] = s.report.isolated_removed;
  j["components_dropped"] = s.report.components_dropped;
  j["nodes_final"] = s.report.nodes_final;
  j["edges_final"] = s.report.edges_final;
  j["clamped_communities"] = s.report.clamped_communities;
  j["quotas"] = s.quotas;
  std::ofstream out(with_suffix(".report.json"));
  out << j.dump(2) << '\n';
}

}  // namespace veo
