#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "veo/community.hpp"
#include "veo/experiment_config.hpp"
#include "veo/graph.hpp"
#include "veo/run_result.hpp"
#include "veo/sparsify.hpp"
#include "veo/stats.hpp"

namespace veo {

/// A network after community detection, merging and sparsification.
struct PreparedNetwork {
  std::string name;
  Graph original;
  CommunityStructure communities;
  SparsifiedGraph working;
};

PreparedNetwork prepare_network(const std::filesystem::path& path, const SparsifySettings& settings,
                                std::uint64_t seed);

/// Seed of repetition `rep` on `network`. Shared by every arm so that arms
/// see the same seed stream.
std::uint64_t run_seed(std::uint64_t base, const std::string& network, std::size_t rep);

struct RunRecord {
  std::string network;
  std::string arm;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::optional<RunResult> result;
  std::string error;
};

struct ArmStats {
  std::string arm;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::vector<double> finals;
};

struct NetworkStats {
  std::string network;
  std::vector<ArmStats> arms;
  /// pairwise[i][j]: arm i against arm j; empty when a sample is too small.
  std::vector<std::vector<std::optional<RankSumResult>>> pairwise;
  std::optional<AnovaResult> anova;
};

struct StatsSummary {
  std::vector<std::string> arms;
  std::string reference_arm;
  double alpha = 0.05;
  std::vector<NetworkStats> networks;
  /// Mean over networks of each arm's rank by mean fitness (1 = best).
  std::vector<double> average_rank;
};

StatsSummary summarize(const std::vector<std::string>& networks, const std::vector<std::string>& arms,
                       const std::vector<RunRecord>& runs, double alpha, const std::string& reference_arm);

struct ExperimentOutcome {
  std::vector<std::string> networks;
  std::vector<std::string> arms;
  std::vector<RunRecord> runs;
  StatsSummary summary;
};

/// Arms of `cfg`, or a single "default" arm when none are configured.
std::vector<Arm> effective_arms(const ExperimentConfig& cfg);
std::string network_name(const std::filesystem::path& path);

/// Runs every arm and repetition, writes runs, transcripts and reports under
/// cfg.out. Throws Error when some arm failed in every repetition on some
/// network (reports are still written first).
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Reads `config.json` and the run files below `out`.
ExperimentOutcome load_outcome(const std::filesystem::path& out);

/// Writes the report files and `manifest.json`.
void emit_reports(const std::filesystem::path& out, const ExperimentConfig& cfg, const ExperimentOutcome& outcome);

}  // namespace veo
