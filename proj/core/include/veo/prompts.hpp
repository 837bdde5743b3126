#pragma once

#include <string>

namespace veo {

enum class OperatorRole {
  init_intelligent,
  init_betweenness_spread,
  init_degree_central,
  crossover,
  mutation_remove,
  mutation_add,
  mutation_oneshot,
};

OperatorRole parse_operator_role(const std::string& name);
std::string to_string(OperatorRole role);
bool is_init_role(OperatorRole role);

struct PromptPair {
  std::string system_prompt;  // context-setting half
  std::string user_prompt;    // output directive half
};

/// Prompt text for `role`. Roles that return a seed list also state the set
/// size `k` in the user prompt.
PromptPair prompt_for(OperatorRole role, std::size_t k);

}  // namespace veo
