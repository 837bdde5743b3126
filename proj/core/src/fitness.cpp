#include "veo/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "veo/error.hpp"

namespace veo {

Objective parse_objective(const std::string& name) {
  if (name == "edv") return Objective::edv;
  if (name == "ic" || name == "ic_spread") return Objective::ic_spread;
  if (name == "dismantling") return Objective::dismantling;
  throw ConfigError("unknown objective '" + name + "' (expected edv, ic_spread or dismantling)");
}

std::string to_string(Objective objective) {
  switch (objective) {
    case Objective::edv: return "edv";
    case Objective::ic_spread: return "ic_spread";
    case Objective::dismantling: return "dismantling";
  }
  return "edv";
}

SeedSet::SeedSet(std::vector<NodeIndex> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw GraphError("seed set contains a duplicate node");
  }
}

SeedSet SeedSet::from_labels(const Graph& g, std::span<const std::string> labels) {
  std::vector<NodeIndex> members;
  members.reserve(labels.size());
  for (const auto& label : labels) members.push_back(g.index_of(label));
  return SeedSet(std::move(members));
}

bool SeedSet::contains(NodeIndex v) const { return std::binary_search(members_.begin(), members_.end(), v); }

std::vector<std::string> SeedSet::labels(const Graph& g) const {
  std::vector<std::string> out;
  out.reserve(members_.size());
  for (NodeIndex v : members_) out.push_back(g.label(v));
  return out;
}

void SeedSet::check_against(const Graph& g) const {
  for (NodeIndex v : members_) {
    if (v >= g.node_count()) throw GraphError("seed node index " + std::to_string(v) + " is not in the graph");
  }
}

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("propagation probability must lie in [0, 1]");
}

}  // namespace

FitnessValue edv(const Graph& g, const SeedSet& seeds, double p) {
  check_probability(p);
  seeds.check_against(g);
  std::vector<std::uint32_t> seed_edges(g.node_count(), 0);
  std::vector<char> is_seed(g.node_count(), 0);
  for (NodeIndex s : seeds.members()) is_seed[s] = 1;
  for (NodeIndex s : seeds.members()) {
    for (NodeIndex b : g.neighbors(s)) {
      if (!is_seed[b]) ++seed_edges[b];
    }
  }
  double value = static_cast<double>(seeds.size());
  for (NodeIndex b = 0; b < g.node_count(); ++b) {
    if (seed_edges[b] > 0) value += 1.0 - std::pow(1.0 - p, static_cast<double>(seed_edges[b]));
  }
  return {value, Objective::edv};
}

FitnessValue ic_simulate(const Graph& g, const SeedSet& seeds, double p, std::size_t trials, std::uint64_t seed) {
  check_probability(p);
  seeds.check_against(g);
  if (trials == 0) throw ConfigError("independent-cascade simulation needs at least one trial");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::uint32_t> stamp(g.node_count(), 0);
  std::vector<NodeIndex> frontier;
  double total = 0.0;
  for (std::uint32_t t = 1; t <= trials; ++t) {
    frontier.assign(seeds.members().begin(), seeds.members().end());
    for (NodeIndex s : frontier) stamp[s] = t;
    std::size_t active = frontier.size();
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const NodeIndex u = frontier[head];
      for (NodeIndex v : g.neighbors(u)) {
        if (stamp[v] == t) continue;
        if (coin(rng) < p) {
          stamp[v] = t;
          frontier.push_back(v);
          ++active;
        }
      }
    }
    total += static_cast<double>(active);
  }
  return {total / static_cast<double>(trials), Objective::ic_spread};
}

FitnessValue dismantling_fitness(const Graph& g, const SeedSet& seeds) {
  seeds.check_against(g);
  std::vector<char> gone(g.node_count(), 0);
  for (NodeIndex s : seeds.members()) gone[s] = 1;
  std::size_t largest = 0;
  std::vector<NodeIndex> stack;
  for (NodeIndex s = 0; s < g.node_count(); ++s) {
    if (gone[s]) continue;
    std::size_t size = 0;
    gone[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeIndex u = stack.back();
      stack.pop_back();
      ++size;
      for (NodeIndex v : g.neighbors(u)) {
        if (!gone[v]) {
          gone[v] = 1;
          stack.push_back(v);
        }
      }
    }
    largest = std::max(largest, size);
  }
  return {static_cast<double>(g.node_count() - largest), Objective::dismantling};
}

FitnessValue evaluate(const Graph& g, const SeedSet& seeds, const FitnessSpec& spec) {
  switch (spec.objective) {
    case Objective::edv: return edv(g, seeds, spec.p);
    case Objective::ic_spread: return ic_simulate(g, seeds, spec.p, spec.ic_trials, spec.ic_seed);
    case Objective::dismantling: return dismantling_fitness(g, seeds);
  }
  throw ConfigError("unknown objective");
}

FitnessValue FitnessCache::get_or_compute(const Graph& g, const SeedSet& seeds, const FitnessSpec& spec) {
  Key key{static_cast<int>(spec.objective), spec.p, seeds.members()};
  {
    std::lock_guard lock(mutex_);
    if (auto it = values_.find(key); it != values_.end()) {
      ++hits_;
      return {it->second, spec.objective};
    }
  }
  const auto value = evaluate(g, seeds, spec);
  std::lock_guard lock(mutex_);
  ++misses_;
  values_.emplace(std::move(key), value.value);
  return value;
}

std::size_t FitnessCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t FitnessCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

}  // namespace veo
