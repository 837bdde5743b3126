#pragma once

#include <cstdint>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "veo/community.hpp"
#include "veo/gateway.hpp"
#include "veo/graph.hpp"
#include "veo/names.hpp"

namespace veo {

/// Probability that an answer is corrupted in each named way. Each fault
/// maps to exactly one validation check. Rates applicable to one role must
/// sum to at most 1; at most one fault is applied per answer.
struct FaultRates {
  double invalid_node = 0.0;      // init: unknown label
  double wrong_size = 0.0;        // init and crossover: one label too many
  double low_degree = 0.0;        // init: one below-median-degree node
  double duplicate = 0.0;         // crossover: repeated label
  double nonparent_source = 0.0;  // crossover: node from neither parent
  double remove_nonseed = 0.0;    // mutation: removal names a non-seed
  double add_invalid = 0.0;       // mutation: addition names an unknown label
  double add_repeat = 0.0;        // mutation: addition names a current seed

  /// Fault names in declaration order, paired with their rates.
  std::vector<std::pair<std::string, double>> named() const;
  /// Sets the rate for `name`; throws ConfigError on an unknown name or a
  /// rate outside [0, 1].
  void set(const std::string& name, double rate);
};

struct MockOracleConfig {
  std::uint64_t rng_seed = 0;
  FaultRates faults;
};

struct MockAnswer {
  std::string text;
  /// Name of the applied fault, empty when the answer is clean.
  std::string fault;
};

/// Deterministic degree and betweenness heuristics standing in for a vision
/// model. Answers depend only on the seed and the order of requests.
class MockOracle final : public VisionChatBackend {
 public:
  /// `names` are the labels shown in images; defaults to the graph labels.
  MockOracle(const Graph& working, MockOracleConfig config);
  MockOracle(const Graph& working, NodeNames names, MockOracleConfig config);

  GatewayResponse complete(const GatewayRequest& request) override;
  std::string name() const override { return "mock"; }

  /// Throws GatewayError when the task lacks the context its role needs.
  MockAnswer respond(const OperatorTask& task);

  double median_degree() const noexcept { return median_; }
  /// Preference order used by an init role, eligible nodes first.
  const std::vector<NodeIndex>& init_ranking(OperatorRole role) const;

 private:
  std::vector<NodeIndex> resolve(const std::vector<std::string>& labels, const char* what) const;
  std::vector<std::string> to_labels(const std::vector<NodeIndex>& nodes) const;
  std::vector<NodeIndex> answer_init(OperatorRole role, std::size_t k);
  bool eligible(NodeIndex v) const;
  std::string pick_fault(const std::vector<std::pair<const char*, double>>& options);

  Graph graph_;
  NodeNames names_;
  MockOracleConfig config_;
  double median_ = 0.0;
  std::vector<NodeIndex> by_degree_;
  std::vector<NodeIndex> intelligent_;
  std::vector<NodeIndex> spread_;
  std::vector<NodeIndex> central_;
  std::vector<int> init_calls_;
  std::mutex mutex_;
  std::mt19937_64 rng_;
};

}  // namespace veo
