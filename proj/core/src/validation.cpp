#include "veo/validation.hpp"

#include <algorithm>
#include <unordered_set>

#include "veo/error.hpp"

namespace veo {

std::string to_string(Check check) {
  static constexpr const char* kNames[] = {"T_I1", "T_I2", "T_I3", "T_C1", "T_C2", "T_C3", "T_M1", "T_M2", "T_M3"};
  return kNames[static_cast<std::size_t>(check)];
}

std::string describe(Check check) {
  switch (check) {
    case Check::TI1: return "valid node";
    case Check::TI2: return "initialization size";
    case Check::TI3: return "low degree";
    case Check::TC1: return "crossover size";
    case Check::TC2: return "duplicate node";
    case Check::TC3: return "parent node source";
    case Check::TM1: return "node presence";
    case Check::TM2: return "mutation valid node";
    case Check::TM3: return "mutation repetitive node";
  }
  return "";
}

void ValidationReport::record(Check check, bool pass) {
  auto& t = tally[static_cast<std::size_t>(check)];
  ++t.checked;
  if (pass) ++t.passed;
}

bool ValidationReport::all_passed() const {
  return std::all_of(tally.begin(), tally.end(), [](const CheckTally& t) { return t.passed == t.checked; });
}

void ValidationReport::merge(const ValidationReport& other) {
  for (std::size_t i = 0; i < kCheckCount; ++i) {
    tally[i].checked += other.tally[i].checked;
    tally[i].passed += other.tally[i].passed;
  }
  repairs.insert(repairs.end(), other.repairs.begin(), other.repairs.end());
}

Strictness parse_strictness(const std::string& name) {
  if (name == "strict") return Strictness::strict;
  if (name == "lax") return Strictness::lax;
  throw ConfigError("unknown repair strictness '" + name + "' (expected strict or lax)");
}

std::string to_string(Strictness strictness) { return strictness == Strictness::strict ? "strict" : "lax"; }

namespace {

struct Resolved {
  std::vector<std::optional<NodeIndex>> nodes;  // per raw token
  std::size_t unknown = 0;
};

Resolved resolve(const std::vector<std::string>& candidate, const Graph& g, const NodeNames* names) {
  Resolved r;
  for (const auto& label : candidate) {
    auto v = names ? names->find(label) : g.find(label);
    if (!v) ++r.unknown;
    r.nodes.push_back(v);
  }
  return r;
}

// Nodes of `from` not yet chosen, by descending degree then index.
void fill_by_degree(const Graph& g, std::vector<NodeIndex> from, std::vector<NodeIndex>& chosen,
                    std::unordered_set<NodeIndex>& used, std::size_t k) {
  std::stable_sort(from.begin(), from.end(), [&](NodeIndex a, NodeIndex b) { return g.degree(a) > g.degree(b); });
  for (NodeIndex v : from) {
    if (chosen.size() >= k) return;
    if (used.insert(v).second) chosen.push_back(v);
  }
}

void fill_random(std::vector<NodeIndex> from, std::vector<NodeIndex>& chosen, std::unordered_set<NodeIndex>& used,
                 std::size_t k, std::mt19937_64& rng) {
  std::shuffle(from.begin(), from.end(), rng);
  for (NodeIndex v : from) {
    if (chosen.size() >= k) return;
    if (used.insert(v).second) chosen.push_back(v);
  }
}

std::vector<NodeIndex> all_nodes(const Graph& g) {
  std::vector<NodeIndex> out(g.node_count());
  for (NodeIndex v = 0; v < out.size(); ++v) out[v] = v;
  return out;
}

void check_context(const ValidationContext& ctx) {
  if (!ctx.graph) throw ConfigError("validation context has no graph");
  if (ctx.k == 0 || ctx.k > ctx.graph->node_count()) throw ConfigError("seed set size must lie in [1, |V|]");
  if (ctx.names && ctx.names->size() != ctx.graph->node_count()) {
    throw ConfigError("validation labels do not cover the graph");
  }
}

}  // namespace

Validated validate_and_repair(const std::vector<std::string>& candidate, const ValidationContext& ctx,
                              std::mt19937_64& rng) {
  check_context(ctx);
  if (ctx.phase == Phase::mutation) throw ConfigError("use validate_swap for the mutation phase");
  const Graph& g = *ctx.graph;
  const auto r = resolve(candidate, g, ctx.names);
  Validated out;
  auto& report = out.report;
  const bool empty = candidate.empty();

  std::unordered_set<NodeIndex> parents(ctx.parent_union.begin(), ctx.parent_union.end());
  if (ctx.phase == Phase::init) {
    const double median = median_degree(g);
    bool low = false;
    for (const auto& v : r.nodes) {
      if (v && static_cast<double>(g.degree(*v)) < median) low = true;
    }
    report.record(Check::TI1, !empty && r.unknown == 0);
    report.record(Check::TI2, candidate.size() == ctx.k);
    report.record(Check::TI3, !empty && !low);
  } else {
    if (ctx.parent_union.empty()) throw ConfigError("crossover validation needs the parent union");
    std::unordered_set<std::string> seen;
    bool dup = false;
    for (const auto& label : candidate) dup |= !seen.insert(label).second;
    bool outside = false;
    for (const auto& v : r.nodes) outside |= !v || !parents.contains(*v);
    report.record(Check::TC1, candidate.size() == ctx.k);
    report.record(Check::TC2, !empty && !dup);
    report.record(Check::TC3, !empty && !outside);
  }

  std::vector<NodeIndex> chosen;
  std::unordered_set<NodeIndex> used;
  std::size_t duplicates = 0;
  for (const auto& v : r.nodes) {
    if (!v) continue;
    if (used.insert(*v).second) {
      chosen.push_back(*v);
    } else {
      ++duplicates;
    }
  }
  if (r.unknown > 0) report.repairs.push_back("dropped " + std::to_string(r.unknown) + " unknown label(s)");
  if (duplicates > 0) report.repairs.push_back("dropped " + std::to_string(duplicates) + " duplicate(s)");

  if (ctx.phase == Phase::crossover && ctx.strictness == Strictness::strict) {
    std::vector<NodeIndex> spare;
    for (NodeIndex v : ctx.parent_union) {
      if (!used.contains(v)) spare.push_back(v);
    }
    std::stable_sort(spare.begin(), spare.end(), [&](NodeIndex a, NodeIndex b) { return g.degree(a) > g.degree(b); });
    std::size_t next = 0;
    std::size_t outside = 0;
    std::vector<NodeIndex> kept;
    for (NodeIndex v : chosen) {
      if (parents.contains(v)) {
        kept.push_back(v);
        continue;
      }
      ++outside;
      if (next < spare.size()) kept.push_back(spare[next++]);
    }
    if (outside > 0) report.repairs.push_back("replaced " + std::to_string(outside) + " non-parent node(s)");
    chosen = std::move(kept);
    used = {chosen.begin(), chosen.end()};
  }

  if (chosen.size() > ctx.k) {
    report.repairs.push_back("truncated " + std::to_string(chosen.size()) + " to " + std::to_string(ctx.k));
    for (std::size_t i = ctx.k; i < chosen.size(); ++i) used.erase(chosen[i]);
    chosen.resize(ctx.k);
  }
  if (chosen.size() < ctx.k) {
    const std::size_t before = chosen.size();
    if (chosen.empty()) {
      if (ctx.phase == Phase::crossover) fill_random(ctx.parent_union, chosen, used, ctx.k, rng);
      fill_random(all_nodes(g), chosen, used, ctx.k, rng);
      report.repairs.push_back("filled " + std::to_string(ctx.k) + " random node(s)");
    } else {
      if (ctx.phase == Phase::crossover) fill_by_degree(g, ctx.parent_union, chosen, used, ctx.k);
      fill_by_degree(g, all_nodes(g), chosen, used, ctx.k);
      report.repairs.push_back("filled " + std::to_string(chosen.size() - before) + " max-degree node(s)");
    }
  }
  out.solution = SeedSet(std::move(chosen));
  return out;
}

ValidatedSwap validate_swap(const std::string& remove, const std::string& add, const ValidationContext& ctx,
                            std::mt19937_64& rng) {
  check_context(ctx);
  if (ctx.phase != Phase::mutation) throw ConfigError("validate_swap is for the mutation phase");
  if (ctx.current.size() != ctx.k) throw ConfigError("current solution does not have k nodes");
  ctx.current.check_against(*ctx.graph);
  const Graph& g = *ctx.graph;
  auto lookup = [&](const std::string& label) -> std::optional<NodeIndex> {
    if (label.empty()) return std::nullopt;
    return ctx.names ? ctx.names->find(label) : g.find(label);
  };
  const auto r = lookup(remove);
  const auto a = lookup(add);
  ValidatedSwap out;
  auto& report = out.report;
  const bool r_ok = r && ctx.current.contains(*r);
  const bool a_valid = a.has_value();
  const bool a_new = a && !ctx.current.contains(*a);
  report.record(Check::TM1, r_ok);
  report.record(Check::TM2, a_valid);
  report.record(Check::TM3, !add.empty() && (!a || a_new));

  if (ctx.current.size() == g.node_count()) {
    out.solution = ctx.current;
    report.repairs.push_back("no non-seed node exists; mutation skipped");
    return out;
  }
  NodeIndex removed = 0;
  if (r_ok) {
    removed = *r;
  } else {
    const auto& m = ctx.current.members();
    removed = m[std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng)];
    report.repairs.push_back("removal replaced by a random seed");
  }
  NodeIndex added = 0;
  if (a_valid && a_new) {
    added = *a;
  } else {
    std::optional<NodeIndex> best;
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
      if (ctx.current.contains(v)) continue;
      if (!best || g.degree(v) > g.degree(*best)) best = v;
    }
    added = *best;
    report.repairs.push_back("addition replaced by the max-degree non-seed");
  }
  std::vector<NodeIndex> next;
  for (NodeIndex v : ctx.current.members()) {
    if (v != removed) next.push_back(v);
  }
  next.push_back(added);
  out.solution = SeedSet(std::move(next));
  out.removed = removed;
  out.added = added;
  out.applied = true;
  return out;
}

}  // namespace veo
