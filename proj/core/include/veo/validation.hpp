#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "veo/fitness.hpp"
#include "veo/graph.hpp"
#include "veo/names.hpp"
#include "veo/render.hpp"

namespace veo {

/// The nine output checks. I: initialization, C: crossover, M: mutation.
enum class Check { TI1, TI2, TI3, TC1, TC2, TC3, TM1, TM2, TM3 };
inline constexpr std::size_t kCheckCount = 9;
inline constexpr std::array<Check, kCheckCount> kAllChecks{Check::TI1, Check::TI2, Check::TI3, Check::TC1, Check::TC2,
                                                           Check::TC3, Check::TM1, Check::TM2, Check::TM3};
/// "T_I1" ... "T_M3".
std::string to_string(Check check);
std::string describe(Check check);

struct CheckTally {
  std::size_t checked = 0;
  std::size_t passed = 0;
  friend bool operator==(const CheckTally&, const CheckTally&) = default;
};

struct ValidationReport {
  std::array<CheckTally, kCheckCount> tally{};
  std::vector<std::string> repairs;

  void record(Check check, bool pass);
  const CheckTally& operator[](Check check) const { return tally[static_cast<std::size_t>(check)]; }
  bool failed(Check check) const { return (*this)[check].passed < (*this)[check].checked; }
  bool all_passed() const;
  /// Adds the other report's tallies and repairs.
  void merge(const ValidationReport& other);
};

enum class Strictness { strict, lax };
Strictness parse_strictness(const std::string& name);
std::string to_string(Strictness strictness);

struct ValidationContext {
  Phase phase = Phase::init;
  std::size_t k = 0;
  const Graph* graph = nullptr;
  /// Labels the model saw; defaults to the graph labels when null.
  const NodeNames* names = nullptr;
  /// Crossover only.
  std::vector<NodeIndex> parent_union;
  /// Mutation only.
  SeedSet current;
  Strictness strictness = Strictness::strict;
};

struct Validated {
  SeedSet solution;
  ValidationReport report;
};

struct ValidatedSwap {
  SeedSet solution;
  ValidationReport report;
  NodeIndex removed = 0;
  NodeIndex added = 0;
  bool applied = false;
};

/// Checks a proposed seed list for the init or crossover phase and repairs it
/// into a valid set of size k. Never throws on bad candidates; an empty
/// candidate fails every applicable check and is filled at random.
Validated validate_and_repair(const std::vector<std::string>& candidate, const ValidationContext& context,
                              std::mt19937_64& rng);

/// Checks a (remove, add) proposal against the current solution and applies
/// the repaired swap. Empty strings stand for an unparseable reply.
ValidatedSwap validate_swap(const std::string& remove, const std::string& add, const ValidationContext& context,
                            std::mt19937_64& rng);

}  // namespace veo
