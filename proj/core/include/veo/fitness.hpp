#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "veo/graph.hpp"

namespace veo {

enum class Objective { edv, ic_spread, dismantling };

Objective parse_objective(const std::string& name);
std::string to_string(Objective objective);

struct FitnessValue {
  double value = 0.0;
  Objective objective = Objective::edv;
};

/// Set of distinct nodes, kept sorted by index.
class SeedSet {
 public:
  SeedSet() = default;
  /// Throws GraphError on duplicates.
  explicit SeedSet(std::vector<NodeIndex> members);
  /// Resolves labels; throws GraphError naming the first unknown label.
  static SeedSet from_labels(const Graph& g, std::span<const std::string> labels);

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(NodeIndex v) const;
  const std::vector<NodeIndex>& members() const noexcept { return members_; }
  std::vector<std::string> labels(const Graph& g) const;

  /// Throws GraphError naming the first member outside `g`.
  void check_against(const Graph& g) const;

  friend bool operator==(const SeedSet&, const SeedSet&) = default;
  friend auto operator<=>(const SeedSet&, const SeedSet&) = default;

 private:
  std::vector<NodeIndex> members_;
};

/// Expected diffusion value: k plus, for every one-hop neighbor b of S outside
/// S, the probability 1 - (1 - p)^delta(b) that one of its delta(b) seed edges fires.
FitnessValue edv(const Graph& g, const SeedSet& seeds, double p);

/// Mean activated-node count over `trials` independent-cascade runs.
FitnessValue ic_simulate(const Graph& g, const SeedSet& seeds, double p, std::size_t trials, std::uint64_t seed);

/// |V| minus the size of the largest component left after deleting the seeds.
FitnessValue dismantling_fitness(const Graph& g, const SeedSet& seeds);

struct FitnessSpec {
  Objective objective = Objective::edv;
  double p = 0.05;
  std::size_t ic_trials = 1000;
  std::uint64_t ic_seed = 0;
};

FitnessValue evaluate(const Graph& g, const SeedSet& seeds, const FitnessSpec& spec);

/// Memoizes fitness by (members, objective, p). Safe for concurrent use.
class FitnessCache {
 public:
  FitnessValue get_or_compute(const Graph& g, const SeedSet& seeds, const FitnessSpec& spec);
  std::size_t hits() const;
  std::size_t misses() const;

 private:
  using Key = std::tuple<int, double, std::vector<NodeIndex>>;
  mutable std::mutex mutex_;
  std::map<Key, double> values_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace veo
