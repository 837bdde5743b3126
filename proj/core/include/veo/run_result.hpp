#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "veo/validation.hpp"

namespace veo {

struct GenerationStats {
  std::size_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
  double best_so_far = 0.0;
  ValidationReport validation;
};

/// One applied mutation, in shown labels.
struct MutationRecord {
  std::size_t generation = 0;
  std::string mode;  // normal, mllm_oneshot or mllm_twophase
  std::string removed;
  std::string added;
  std::size_t removed_degree = 0;
  std::size_t added_degree = 0;
};

struct RunResult {
  std::string run_id;
  std::string objective;
  std::string init_mode;
  std::string reproduction;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::size_t population = 0;
  std::size_t generations = 0;
  std::size_t working_nodes = 0;
  std::size_t working_edges = 0;
  GenerationStats initial;
  std::vector<GenerationStats> trace;
  std::vector<std::string> best_working_labels;
  std::vector<std::string> best_original_labels;
  double best_fitness = 0.0;           // on the search graph
  double best_original_fitness = 0.0;  // re-scored on the original graph
  ValidationReport validation;
  std::vector<MutationRecord> mutations;
  std::vector<std::string> events;
  std::vector<std::vector<std::string>> final_population;
  std::size_t gateway_calls = 0;
  std::size_t fitness_evaluations = 0;
};

/// Deterministic JSON (fixed key order, no timings).
std::string to_json(const RunResult& r);
RunResult run_result_from_json(const std::string& text);

}  // namespace veo
