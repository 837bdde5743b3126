#include "veo/experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "veo/error.hpp"
#include "veo/hashing.hpp"

namespace veo {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used == v.size()) return out;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

bool is_init_mode(const std::string& name) {
  try {
    parse_init_mode(name);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

bool is_reproduction(const std::string& name) {
  try {
    parse_reproduction(name);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::vector<std::pair<std::string, nlohmann::json>>& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string full = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, full, out);
    } else {
      out.emplace_back(full, value);
    }
  }
}

std::string scalar_text(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw ConfigError(key + ": expected a scalar value");
}

}  // namespace

Arm parse_arm(const std::string& spec) {
  Arm arm;
  const auto colon = spec.find(':');
  arm.name = trim(spec.substr(0, colon));
  if (arm.name.empty()) throw ConfigError("arm name must not be empty: '" + spec + "'");
  if (is_init_mode(arm.name)) arm.overrides.emplace_back("engine.init_mode", arm.name);
  if (is_reproduction(arm.name)) arm.overrides.emplace_back("engine.reproduction", arm.name);
  if (colon == std::string::npos) return arm;
  std::stringstream rest(spec.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("arm override needs key=value: '" + item + "'");
    arm.overrides.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  return arm;
}

std::string format_arm(const Arm& arm) {
  // Overrides implied by the name are re-derived by parse_arm.
  const auto implied = parse_arm(arm.name).overrides;
  std::size_t skip = 0;
  while (skip < implied.size() && skip < arm.overrides.size() && arm.overrides[skip] == implied[skip]) ++skip;
  std::string out = arm.name;
  for (std::size_t i = skip; i < arm.overrides.size(); ++i) {
    out += i == skip ? ':' : ',';
    out += arm.overrides[i].first + "=" + arm.overrides[i].second;
  }
  return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& v) {
  auto& e = engine;
  auto& s = sparsify;
  if (key == "networks") {
    networks.clear();
    std::stringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (!trim(item).empty()) networks.emplace_back(trim(item));
    }
  } else if (key == "runs") {
    runs = to_u64(key, v);
  } else if (key == "seed") {
    seed = to_u64(key, v);
  } else if (key == "jobs") {
    jobs = to_u64(key, v);
  } else if (key == "backend") {
    backend = v;
  } else if (key == "out") {
    out = v;
  } else if (key == "alpha") {
    alpha = to_double(key, v);
  } else if (key == "reference_arm") {
    reference_arm = v;
  } else if (key == "save_images") {
    save_images = to_bool(key, v);
  } else if (key == "sparsify.n_v") {
    s.n_v = to_u64(key, v);
  } else if (key == "sparsify.n_e") {
    s.n_e = to_u64(key, v);
  } else if (key == "sparsify.n_c") {
    s.n_c = to_u64(key, v);
  } else if (key == "sparsify.small_fraction") {
    s.small_fraction = to_double(key, v);
  } else if (key == "sparsify.prune") {
    s.prune = parse_prune_policy(v);
  } else if (key == "sparsify.relabel") {
    s.relabel = to_bool(key, v);
  } else if (key == "engine.k") {
    e.k = to_u64(key, v);
  } else if (key == "engine.population") {
    e.population = to_u64(key, v);
  } else if (key == "engine.p_c") {
    e.p_c = to_double(key, v);
  } else if (key == "engine.p_m") {
    e.p_m = to_double(key, v);
  } else if (key == "engine.generations") {
    e.generations = to_u64(key, v);
  } else if (key == "engine.objective") {
    e.objective = parse_objective(v);
  } else if (key == "engine.p") {
    e.p = to_double(key, v);
  } else if (key == "engine.ic_trials") {
    e.ic_trials = to_u64(key, v);
  } else if (key == "engine.init_mode") {
    e.init_mode = parse_init_mode(v);
  } else if (key == "engine.reproduction") {
    e.reproduction = parse_reproduction(v);
  } else if (key == "engine.layout") {
    e.layout = parse_layout_style(v);
  } else if (key == "engine.strictness") {
    e.strictness = parse_strictness(v);
  } else if (key == "engine.fitness_graph") {
    e.fitness_graph = parse_fitness_graph(v);
  } else if (key == "engine.dedupe_retries") {
    e.dedupe_retries = to_u64(key, v);
  } else if (key == "engine.model_id") {
    e.model_id = v;
    live.model_id = v;
  } else if (key == "engine.temperature") {
    e.temperature = to_double(key, v);
  } else if (key.rfind("mock.fault.", 0) == 0) {
    faults.set(key.substr(11), to_double(key, v));
  } else if (key == "live.base_url") {
    live.base_url = v;
  } else if (key == "live.model_id") {
    live.model_id = v;
    e.model_id = v;
  } else if (key == "live.timeout_s") {
    live.timeout_s = to_double(key, v);
  } else if (key == "live.max_retries") {
    live.max_retries = static_cast<int>(to_u64(key, v));
  } else if (key == "live.backoff_initial_s") {
    live.backoff_initial_s = to_double(key, v);
  } else if (key == "live.api_key_env") {
    live.api_key_env = v;
  } else if (key == "live.max_inflight") {
    max_inflight = static_cast<int>(to_u64(key, v));
  } else if (key == "live.rps") {
    requests_per_second = to_double(key, v);
  } else if (key == "arms") {
    arms.clear();
    std::stringstream in(v);
    std::string item;
    while (std::getline(in, item, ';')) {
      if (!trim(item).empty()) arms.push_back(parse_arm(item));
    }
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

ExperimentConfig ExperimentConfig::for_arm(const Arm& arm) const {
  ExperimentConfig out = *this;
  for (const auto& [key, value] : arm.overrides) out.set(key, value);
  return out;
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (backend != "mock" && backend != "live") throw ConfigError("backend must be mock or live");
  if (networks.empty()) throw ConfigError("no networks configured");
  for (const auto& p : networks) {
    if (!std::filesystem::exists(p)) throw ConfigError("network file '" + p.string() + "' does not exist");
  }
  if (!(sparsify.small_fraction > 0.0 && sparsify.small_fraction < 1.0)) throw ConfigError("sparsify.small_fraction must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (sparsify.n_v == 0 || sparsify.n_e == 0) throw ConfigError("sparsify.n_v and sparsify.n_e must be positive");
  if (max_inflight < 1) throw ConfigError("live.max_inflight must be at least 1");
  auto check_engine = [](const EngineConfig& e) {
    auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (e.k < 1 || e.population < 2 || !unit(e.p_c) || !unit(e.p_m) || !unit(e.p)) {
      throw ConfigError("engine settings out of range (k >= 1, population >= 2, probabilities in [0, 1])");
    }
  };
  check_engine(engine);
  for (const auto& arm : arms) check_engine(for_arm(arm).engine);
  if (!reference_arm.empty() &&
      std::none_of(arms.begin(), arms.end(), [&](const Arm& a) { return a.name == reference_arm; })) {
    throw ConfigError("reference_arm '" + reference_arm + "' is not one of the arms");
  }
}

std::string ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  std::vector<std::string> nets;
  for (const auto& p : networks) nets.push_back(p.string());
  j["networks"] = nets;
  j["runs"] = runs;
  j["seed"] = seed;
  j["backend"] = backend;
  j["alpha"] = alpha;
  j["reference_arm"] = reference_arm;
  j["save_images"] = save_images;
  j["sparsify.n_v"] = sparsify.n_v;
  j["sparsify.n_e"] = sparsify.n_e;
  j["sparsify.n_c"] = sparsify.n_c;
  j["sparsify.small_fraction"] = sparsify.small_fraction;
  j["sparsify.prune"] = veo::to_string(sparsify.prune);
  j["sparsify.relabel"] = sparsify.relabel;
  j["engine.k"] = engine.k;
  j["engine.population"] = engine.population;
  j["engine.p_c"] = engine.p_c;
  j["engine.p_m"] = engine.p_m;
  j["engine.generations"] = engine.generations;
  j["engine.objective"] = veo::to_string(engine.objective);
  j["engine.p"] = engine.p;
  j["engine.ic_trials"] = engine.ic_trials;
  j["engine.init_mode"] = veo::to_string(engine.init_mode);
  j["engine.reproduction"] = veo::to_string(engine.reproduction);
  j["engine.layout"] = veo::to_string(engine.layout);
  j["engine.strictness"] = veo::to_string(engine.strictness);
  j["engine.fitness_graph"] = veo::to_string(engine.fitness_graph);
  j["engine.dedupe_retries"] = engine.dedupe_retries;
  j["engine.model_id"] = engine.model_id;
  j["engine.temperature"] = engine.temperature;
  for (const auto& [name, rate] : faults.named()) j["mock.fault." + name] = rate;
  j["live.base_url"] = live.base_url;
  j["live.model_id"] = live.model_id;
  j["live.timeout_s"] = live.timeout_s;
  j["live.max_retries"] = live.max_retries;
  j["live.max_inflight"] = max_inflight;
  j["live.rps"] = requests_per_second;
  j["live.backoff_initial_s"] = live.backoff_initial_s;
  j["live.api_key_env"] = live.api_key_env;
  auto& arm_list = j["arms"] = nlohmann::ordered_json::array();
  for (const auto& arm : arms) arm_list.push_back(format_arm(arm));
  return j.dump(2);
}

std::string ExperimentConfig::hash() const { return sha256_hex(to_json()); }

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError("configuration must be a JSON object");
  std::vector<std::pair<std::string, nlohmann::json>> flat;
  flatten(j, "", flat);
  ExperimentConfig cfg;
  for (const auto& [key, value] : flat) {
    if (key == "networks" && value.is_array()) {
      cfg.networks.clear();
      for (const auto& p : value) cfg.networks.emplace_back(p.get<std::string>());
    } else if (key == "arms" && value.is_array()) {
      cfg.arms.clear();
      for (const auto& a : value) cfg.arms.push_back(parse_arm(a.get<std::string>()));
    } else {
      cfg.set(key, scalar_text(key, value));
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto cfg = parse_experiment_config(buf.str());
  // Relative network paths are resolved against the config file.
  for (auto& p : cfg.networks) {
    if (p.is_relative()) p = path.parent_path() / p;
  }
  return cfg;
}

}  // namespace veo
