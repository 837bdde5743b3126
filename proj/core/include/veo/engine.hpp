#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "veo/fitness.hpp"
#include "veo/gateway.hpp"
#include "veo/graph.hpp"
#include "veo/layout.hpp"
#include "veo/names.hpp"
#include "veo/render.hpp"
#include "veo/run_result.hpp"
#include "veo/sparsify.hpp"
#include "veo/validation.hpp"

namespace veo {

enum class InitMode { random, refined_random, high_degree, high_betweenness, mllm };
enum class Reproduction { normal, mllm_oneshot, mllm_twophase };
/// Graph the fitness is computed on during the search.
enum class FitnessGraph { working, original };

InitMode parse_init_mode(const std::string& name);
std::string to_string(InitMode mode);
Reproduction parse_reproduction(const std::string& name);
std::string to_string(Reproduction mode);
FitnessGraph parse_fitness_graph(const std::string& name);
std::string to_string(FitnessGraph g);

struct EngineConfig {
  std::size_t k = 10;
  std::size_t population = 15;
  double p_c = 0.2;
  double p_m = 0.1;
  std::size_t generations = 10;
  Objective objective = Objective::edv;
  double p = 0.05;
  std::size_t ic_trials = 1000;
  InitMode init_mode = InitMode::refined_random;
  Reproduction reproduction = Reproduction::normal;
  LayoutStyle layout = LayoutStyle::kamada_kawai;
  std::uint64_t rng_seed = 0;
  Strictness strictness = Strictness::strict;
  FitnessGraph fitness_graph = FitnessGraph::working;
  /// Attempts to replace an individual identical to an earlier one.
  std::size_t dedupe_retries = 10;
  std::string model_id = "gpt-4o-2024-11-20";
  double temperature = 0.7;
  RenderSpec render;
  /// When set, every image sent to the gateway is also written under
  /// `<image_dir>/<run_id>/<generation>/<individual>_<phase>.png`.
  std::filesystem::path image_dir;
  /// When set, layouts are cached here across runs.
  std::filesystem::path layout_cache_dir;
  std::string run_id = "run";

  /// Throws ConfigError on out-of-range values.
  void validate(std::size_t working_nodes) const;
  bool uses_gateway() const { return init_mode == InitMode::mllm || reproduction != Reproduction::normal; }
};

struct Individual {
  SeedSet solution;
  double fitness = std::numeric_limits<double>::quiet_NaN();
  std::string origin;
};

/// Binary tournament twice, redrawing the second parent while it equals the
/// first. Ties in a tournament go to the lower index. Throws ConfigError on
/// fewer than two individuals.
std::pair<std::size_t, std::size_t> select_parents(std::span<const double> fitness, std::mt19937_64& rng);

/// One evolutionary run on a (possibly sparsified) working graph.
class Engine {
 public:
  /// `gateway` may be null when no MLLM mode is configured.
  Engine(const Graph& original, const SparsifiedGraph& working, EngineConfig config, Gateway* gateway = nullptr);

  std::vector<Individual> initialize_population();
  Individual crossover_step(const Individual& a, const Individual& b, std::size_t slot);
  Individual mutation_step(const Individual& ind, std::size_t slot);
  double evaluate(const SeedSet& s);
  RunResult run();

  /// The graph individuals index into.
  const Graph& search_graph() const;
  const NodeNames& shown_names() const noexcept { return shown_; }
  std::mt19937_64& rng() noexcept { return rng_; }
  const ValidationReport& validation_total() const noexcept { return total_report_; }
  const std::vector<MutationRecord>& mutation_log() const noexcept { return mutations_; }
  const std::vector<std::string>& events() const noexcept { return events_; }

 private:
  SeedSet random_solution(std::span<const NodeIndex> pool);
  SeedSet sample_init(InitMode mode);
  std::optional<SeedSet> mllm_init(OperatorRole role);
  Individual normal_crossover(const Individual& a, const Individual& b);
  Individual normal_mutation(const Individual& ind);
  std::optional<Individual> mllm_crossover(const Individual& a, const Individual& b, std::size_t slot);
  std::optional<Individual> mllm_mutation(const Individual& ind, std::size_t slot);

  std::vector<NodeIndex> project(const SeedSet& s) const;
  NodeIndex lift(NodeIndex working) const;
  std::vector<std::string> shown_labels(const std::vector<NodeIndex>& working) const;
  const Layout& layout();
  Image render(const std::vector<NodeIndex>& working_solution, Phase phase, const std::string& tag);
  GatewayResponse call(const OperatorTask& task, std::vector<Image> images);

  const Graph& original_;
  const SparsifiedGraph& working_;
  EngineConfig config_;
  Gateway* gateway_;
  NodeNames shown_;
  std::vector<std::optional<NodeIndex>> to_working_;
  std::mt19937_64 rng_;
  FitnessSpec fitness_spec_;
  FitnessCache cache_;
  std::optional<Layout> layout_;
  std::size_t generation_ = 0;
  std::size_t gateway_calls_ = 0;
  ValidationReport generation_report_;
  ValidationReport total_report_;
  std::vector<MutationRecord> mutations_;
  std::vector<std::string> events_;
};

RunResult evolve(const Graph& original, const SparsifiedGraph& working, const EngineConfig& config,
                 Gateway* gateway = nullptr);

}  // namespace veo
