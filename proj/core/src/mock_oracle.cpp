#include "veo/mock_oracle.hpp"

#include <algorithm>
#include <numeric>

#include "veo/error.hpp"
#include "veo/response_parse.hpp"
#include "veo/sparsify.hpp"

namespace veo {

std::vector<std::pair<std::string, double>> FaultRates::named() const {
  return {{"invalid_node", invalid_node}, {"wrong_size", wrong_size},     {"low_degree", low_degree},
          {"duplicate", duplicate},       {"nonparent_source", nonparent_source}, {"remove_nonseed", remove_nonseed},
          {"add_invalid", add_invalid},   {"add_repeat", add_repeat}};
}

void FaultRates::set(const std::string& name, double rate) {
  double* slot = nullptr;
  if (name == "invalid_node") slot = &invalid_node;
  if (name == "wrong_size") slot = &wrong_size;
  if (name == "low_degree") slot = &low_degree;
  if (name == "duplicate") slot = &duplicate;
  if (name == "nonparent_source") slot = &nonparent_source;
  if (name == "remove_nonseed") slot = &remove_nonseed;
  if (name == "add_invalid") slot = &add_invalid;
  if (name == "add_repeat") slot = &add_repeat;
  if (!slot) throw ConfigError("unknown fault class '" + name + "'");
  if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError("fault rate for " + name + " must lie in [0, 1]");
  *slot = rate;
}

namespace {

void check_rates(const FaultRates& f) {
  for (const auto& [name, rate] : f.named()) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError("fault rate '" + name + "' must lie in [0, 1]");
  }
  auto over = [](double sum) { return sum > 1.0 + 1e-12; };
  if (over(f.invalid_node + f.wrong_size + f.low_degree)) throw ConfigError("init fault rates sum above 1");
  if (over(f.wrong_size + f.duplicate + f.nonparent_source)) throw ConfigError("crossover fault rates sum above 1");
  if (over(f.remove_nonseed + f.add_invalid + f.add_repeat)) throw ConfigError("mutation fault rates sum above 1");
}

// Round-robin across communities: each community's members in score order,
// communities ordered by their best member.
std::vector<NodeIndex> round_robin(const CommunityStructure& cs, const std::vector<NodeIndex>& ranking) {
  std::vector<std::size_t> position(ranking.size());
  for (std::size_t i = 0; i < ranking.size(); ++i) position[ranking[i]] = i;
  std::vector<std::vector<NodeIndex>> lists;
  for (auto members : cs.communities()) {
    std::sort(members.begin(), members.end(), [&](NodeIndex a, NodeIndex b) { return position[a] < position[b]; });
    lists.push_back(std::move(members));
  }
  std::sort(lists.begin(), lists.end(), [&](const auto& a, const auto& b) { return position[a[0]] < position[b[0]]; });
  std::vector<NodeIndex> out;
  out.reserve(ranking.size());
  for (std::size_t round = 0; out.size() < ranking.size(); ++round) {
    for (const auto& list : lists) {
      if (round < list.size()) out.push_back(list[round]);
    }
  }
  return out;
}

}  // namespace

MockOracle::MockOracle(const Graph& working, MockOracleConfig config)
    : MockOracle(working, NodeNames::of(working), std::move(config)) {}

MockOracle::MockOracle(const Graph& working, NodeNames names, MockOracleConfig config)
    : graph_(working), names_(std::move(names)), config_(config), init_calls_(3, 0), rng_(config.rng_seed) {
  check_rates(config_.faults);
  if (graph_.empty()) throw GraphError("mock oracle needs a non-empty graph");
  if (names_.size() != graph_.node_count()) throw GraphError("shown labels do not cover the graph");
  median_ = veo::median_degree(graph_);
  const auto degree = degrees_as_scores(graph_);
  by_degree_ = rank_descending(degree);
  const auto bc = ranking_betweenness(graph_);
  const auto by_bc = rank_descending(bc);
  const auto cs = graph_.edge_count() > 0 ? detect_fastgreedy(graph_) : CommunityStructure::singletons(graph_.node_count());

  auto eligible_first = [&](std::vector<NodeIndex> order) {
    std::stable_partition(order.begin(), order.end(), [&](NodeIndex v) { return eligible(v); });
    return order;
  };
  intelligent_ = eligible_first(round_robin(cs, by_degree_));
  spread_ = eligible_first(round_robin(cs, by_bc));
  central_ = eligible_first(by_degree_);
}

bool MockOracle::eligible(NodeIndex v) const { return static_cast<double>(graph_.degree(v)) >= median_; }

const std::vector<NodeIndex>& MockOracle::init_ranking(OperatorRole role) const {
  switch (role) {
    case OperatorRole::init_intelligent: return intelligent_;
    case OperatorRole::init_betweenness_spread: return spread_;
    case OperatorRole::init_degree_central: return central_;
    default: throw GatewayError("not an init role: " + to_string(role));
  }
}

std::vector<NodeIndex> MockOracle::resolve(const std::vector<std::string>& labels, const char* what) const {
  std::vector<NodeIndex> out;
  for (const auto& label : labels) {
    auto v = names_.find(label);
    if (!v) throw GatewayError(std::string(what) + " holds unknown label '" + label + "'");
    out.push_back(*v);
  }
  return out;
}

std::vector<std::string> MockOracle::to_labels(const std::vector<NodeIndex>& nodes) const {
  std::vector<std::string> out;
  out.reserve(nodes.size());
  for (NodeIndex v : nodes) out.push_back(names_.label(v));
  return out;
}

std::vector<NodeIndex> MockOracle::answer_init(OperatorRole role, std::size_t k) {
  const auto& ranking = init_ranking(role);
  auto& calls = init_calls_[static_cast<std::size_t>(role)];
  if (k > ranking.size()) throw GatewayError("k exceeds the number of nodes");
  if (calls++ == 0) return {ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(k)};
  // Later calls sample from the top of the ranking so agents return variety.
  const auto n_eligible = static_cast<std::size_t>(std::count_if(ranking.begin(), ranking.end(), [&](NodeIndex v) { return eligible(v); }));
  const std::size_t pool = std::max(k, std::min(2 * k, n_eligible));
  std::vector<std::size_t> slots(pool);
  std::iota(slots.begin(), slots.end(), 0);
  std::shuffle(slots.begin(), slots.end(), rng_);
  slots.resize(k);
  std::sort(slots.begin(), slots.end());
  std::vector<NodeIndex> out;
  for (std::size_t s : slots) out.push_back(ranking[s]);
  return out;
}

std::string MockOracle::pick_fault(const std::vector<std::pair<const char*, double>>& options) {
  double total = 0.0;
  for (const auto& o : options) total += o.second;
  if (total <= 0.0) return {};
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
  double edge = 0.0;
  for (const auto& [name, rate] : options) {
    edge += rate;
    if (u < edge) return name;
  }
  return {};
}

MockAnswer MockOracle::respond(const OperatorTask& task) {
  std::lock_guard lock(mutex_);
  const auto& f = config_.faults;
  auto in = [](const std::vector<NodeIndex>& xs, NodeIndex v) { return std::find(xs.begin(), xs.end(), v) != xs.end(); };
  MockAnswer answer;

  if (is_init_role(task.role) || task.role == OperatorRole::crossover) {
    if (task.k == 0) throw GatewayError("seed set size must be at least 1");
    std::vector<NodeIndex> out;
    std::vector<NodeIndex> pool;  // nodes a size fault may add
    if (task.role == OperatorRole::crossover) {
      if (task.parent_a.empty() || task.parent_b.empty()) throw GatewayError("crossover needs two parents");
      auto a = resolve(task.parent_a, "parent");
      auto b = resolve(task.parent_b, "parent");
      a.insert(a.end(), b.begin(), b.end());
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
      std::stable_sort(a.begin(), a.end(), [&](NodeIndex x, NodeIndex y) { return graph_.degree(x) > graph_.degree(y); });
      if (task.k > a.size()) throw GatewayError("parents hold fewer than k distinct nodes");
      out.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(task.k));
      pool = std::move(a);
      answer.fault = pick_fault({{"wrong_size", f.wrong_size}, {"duplicate", f.duplicate},
                                 {"nonparent_source", f.nonparent_source}});
    } else {
      out = answer_init(task.role, task.k);
      for (NodeIndex v : init_ranking(task.role)) {
        if (eligible(v)) pool.push_back(v);
      }
      answer.fault = pick_fault({{"invalid_node", f.invalid_node}, {"wrong_size", f.wrong_size},
                                 {"low_degree", f.low_degree}});
    }
    auto labels = to_labels(out);
    if (answer.fault == "invalid_node") {
      labels[0] = names_.unused_label();
    } else if (answer.fault == "wrong_size") {
      auto extra = std::find_if(pool.begin(), pool.end(), [&](NodeIndex v) { return !in(out, v); });
      if (extra != pool.end()) {
        labels.push_back(names_.label(*extra));
      } else if (labels.size() > 1) {
        labels.pop_back();
      } else {
        answer.fault.clear();
      }
    } else if (answer.fault == "low_degree") {
      std::optional<NodeIndex> low;
      for (auto it = by_degree_.rbegin(); it != by_degree_.rend(); ++it) {
        if (!eligible(*it) && !in(out, *it)) {
          low = *it;
          break;
        }
      }
      if (low) {
        labels.back() = names_.label(*low);
      } else {
        answer.fault.clear();
      }
    } else if (answer.fault == "duplicate") {
      if (labels.size() >= 2) {
        labels.back() = labels.front();
      } else {
        answer.fault.clear();
      }
    } else if (answer.fault == "nonparent_source") {
      auto outside = std::find_if(by_degree_.begin(), by_degree_.end(), [&](NodeIndex v) { return !in(pool, v); });
      if (outside != by_degree_.end()) {
        labels.back() = names_.label(*outside);
      } else {
        answer.fault.clear();
      }
    }
    answer.text = format_node_list(labels);
    return answer;
  }

  if (task.current.empty()) throw GatewayError("mutation needs the current solution");
  const auto seeds = resolve(task.current, "current solution");
  std::vector<NodeIndex> non_seeds;
  for (NodeIndex v : by_degree_) {
    if (!in(seeds, v)) non_seeds.push_back(v);
  }
  if (non_seeds.empty()) throw GatewayError("every node is already a seed");
  auto min_seed = *std::min_element(seeds.begin(), seeds.end(), [&](NodeIndex a, NodeIndex b) {
    return graph_.degree(a) != graph_.degree(b) ? graph_.degree(a) < graph_.degree(b) : a < b;
  });
  NodeIndex add = non_seeds.front();
  std::string remove_label = names_.label(min_seed);
  std::string add_label = names_.label(add);

  auto corrupt_remove = [&] {
    // Lowest-degree non-seed other than the proposed addition.
    for (auto it = non_seeds.rbegin(); it != non_seeds.rend(); ++it) {
      if (*it != add || non_seeds.size() == 1) {
        remove_label = names_.label(*it);
        return true;
      }
    }
    return false;
  };
  auto corrupt_add_repeat = [&] {
    for (NodeIndex s : seeds) {
      if (names_.label(s) != remove_label || seeds.size() == 1) {
        add_label = names_.label(s);
        return true;
      }
    }
    return false;
  };

  switch (task.role) {
    case OperatorRole::mutation_remove:
      answer.fault = pick_fault({{"remove_nonseed", f.remove_nonseed}});
      if (answer.fault == "remove_nonseed" && !corrupt_remove()) answer.fault.clear();
      answer.text = remove_label;
      break;
    case OperatorRole::mutation_add:
      answer.fault = pick_fault({{"add_invalid", f.add_invalid}, {"add_repeat", f.add_repeat}});
      if (answer.fault == "add_invalid") add_label = names_.unused_label();
      if (answer.fault == "add_repeat" && !corrupt_add_repeat()) answer.fault.clear();
      answer.text = add_label;
      break;
    case OperatorRole::mutation_oneshot:
      answer.fault = pick_fault(
          {{"remove_nonseed", f.remove_nonseed}, {"add_invalid", f.add_invalid}, {"add_repeat", f.add_repeat}});
      if (answer.fault == "remove_nonseed" && !corrupt_remove()) answer.fault.clear();
      if (answer.fault == "add_invalid") add_label = names_.unused_label();
      if (answer.fault == "add_repeat" && !corrupt_add_repeat()) answer.fault.clear();
      answer.text = "[" + remove_label + ", " + add_label + "]";
      break;
    default:
      throw GatewayError("unsupported role " + to_string(task.role));
  }
  return answer;
}

GatewayResponse MockOracle::complete(const GatewayRequest& request) {
  if (!request.task) throw GatewayError("the mock backend needs an operator task on the request");
  GatewayResponse response;
  response.text = respond(*request.task).text;
  response.latency_s = 0.0;
  return response;
}

}  // namespace veo
