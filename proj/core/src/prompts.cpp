#include "veo/prompts.hpp"

#include "veo/error.hpp"

namespace veo {

namespace {

constexpr const char* kInitContext =
    "You are an expert in network science and will be provided with one network in the form of an image. "
    "Please help me intelligently select nodes as the diffusion seeds in this network to achieve influence "
    "maximization.";

constexpr const char* kListDirective = "Only provide a list of node indices separated by commas.";

constexpr const char* kMutationPreamble =
    "Examine a network image where seed nodes are colored and non-seed nodes are labeled in white. ";

std::string size_line(std::size_t k) { return "Select exactly " + std::to_string(k) + " nodes. "; }

}  // namespace

OperatorRole parse_operator_role(const std::string& name) {
  for (auto role : {OperatorRole::init_intelligent, OperatorRole::init_betweenness_spread,
                    OperatorRole::init_degree_central, OperatorRole::crossover, OperatorRole::mutation_remove,
                    OperatorRole::mutation_add, OperatorRole::mutation_oneshot}) {
    if (to_string(role) == name) return role;
  }
  throw ConfigError("unknown operator role '" + name + "'");
}

std::string to_string(OperatorRole role) {
  switch (role) {
    case OperatorRole::init_intelligent: return "init_intelligent";
    case OperatorRole::init_betweenness_spread: return "init_betweenness_spread";
    case OperatorRole::init_degree_central: return "init_degree_central";
    case OperatorRole::crossover: return "crossover";
    case OperatorRole::mutation_remove: return "mutation_remove";
    case OperatorRole::mutation_add: return "mutation_add";
    case OperatorRole::mutation_oneshot: return "mutation_oneshot";
  }
  return "unknown";
}

bool is_init_role(OperatorRole role) {
  return role == OperatorRole::init_intelligent || role == OperatorRole::init_betweenness_spread ||
         role == OperatorRole::init_degree_central;
}

PromptPair prompt_for(OperatorRole role, std::size_t k) {
  switch (role) {
    case OperatorRole::init_intelligent:
      return {kInitContext, size_line(k) + kListDirective};
    case OperatorRole::init_betweenness_spread:
      return {kInitContext, size_line(k) +
                                "Here are some tips: (1) Choose large-betweenness nodes. (2) Pick nodes spread across "
                                "different center parts of the network. " +
                                kListDirective};
    case OperatorRole::init_degree_central:
      return {kInitContext, size_line(k) +
                                "Here are some tips: (1) Choose large-degree nodes. (2) Pick nodes at the center place "
                                "of the network. " +
                                kListDirective};
    case OperatorRole::crossover:
      return {"Examine a network image where seed nodes are distinctly labeled. Carefully analyze the seed nodes "
              "present in each network image and suggest an optimal set of seed nodes that harness the advantages "
              "of both parent networks to maximize influence spread.",
              size_line(k) +
                  "Focus on selecting high-degree nodes or nodes in strategic positions that significantly enhance "
                  "network connectivity. Provide your answer as a list of node indices, separated by commas."};
    case OperatorRole::mutation_remove:
      return {std::string(kMutationPreamble) +
                  "Identify the current seed node that contributes the least to influence maximization.",
              "Focus on nodes that appear trivial or less connected. Provide the index of this node."};
    case OperatorRole::mutation_add:
      return {std::string(kMutationPreamble) +
                  "Propose a non-seed node that could significantly increase the network's influence spread.",
              "Focus on nodes with higher degrees or strategically critical positions in the network. Provide the "
              "index of this node."};
    case OperatorRole::mutation_oneshot:
      return {std::string(kMutationPreamble) +
                  "Identify the current seed node that contributes the least to influence maximization and propose "
                  "a non-seed node in white that could significantly increase the network's influence spread.",
              "Provide the answer as a list: the first element is the index of the seed node to remove, and the "
              "second element is the index of the non-seed node to add."};
  }
  throw ConfigError("unknown operator role");
}

}  // namespace veo
