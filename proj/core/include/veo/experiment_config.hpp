#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "veo/engine.hpp"
#include "veo/live_backend.hpp"
#include "veo/mock_oracle.hpp"
#include "veo/sparsify.hpp"

namespace veo {

struct SparsifySettings {
  std::size_t n_v = 50;
  std::size_t n_e = 100;
  /// Target community count; 0 skips the merge-to-target step.
  std::size_t n_c = 0;
  double small_fraction = 0.02;
  PrunePolicy prune = PrunePolicy::random;
  bool relabel = true;
};

/// A named variant of the base configuration. `overrides` are flat
/// key/value settings applied on top of the base.
struct Arm {
  std::string name;
  std::vector<std::pair<std::string, std::string>> overrides;
};

/// `name[:key=value,...]`. A name that is an init mode or reproduction mode
/// sets that mode before the explicit overrides.
Arm parse_arm(const std::string& spec);
/// Inverse of parse_arm.
std::string format_arm(const Arm& arm);

struct ExperimentConfig {
  std::vector<std::filesystem::path> networks;
  std::size_t runs = 20;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::string backend = "mock";
  std::filesystem::path out = "veo_out";
  double alpha = 0.05;
  /// Reference arm for the +/≈/- decisions; defaults to the first arm.
  std::string reference_arm;
  bool save_images = false;
  SparsifySettings sparsify;
  EngineConfig engine;
  FaultRates faults;
  LiveConfig live;
  int max_inflight = 4;
  double requests_per_second = 0.0;
  std::vector<Arm> arms;

  /// Sets one flat key from its textual value. Throws ConfigError on an
  /// unknown key or a malformed value.
  void set(const std::string& key, const std::string& value);
  /// Copy with the arm's overrides applied.
  ExperimentConfig for_arm(const Arm& arm) const;
  /// Throws ConfigError on invalid combinations or missing network files.
  void validate() const;
  /// Canonical flat JSON of every setting.
  std::string to_json() const;
  /// SHA-256 of to_json().
  std::string hash() const;
};

/// Reads a JSON object; nested objects are flattened with dots, so
/// {"engine": {"k": 5}} and {"engine.k": 5} are equivalent.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

}  // namespace veo
