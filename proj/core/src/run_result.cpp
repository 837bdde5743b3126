#include "veo/run_result.hpp"

#include "json.hpp"

#include "veo/error.hpp"

namespace veo {

namespace {

using nlohmann::ordered_json;

ordered_json report_json(const ValidationReport& r) {
  ordered_json checks = ordered_json::object();
  for (Check c : kAllChecks) {
    const auto& t = r[c];
    checks[to_string(c)] = {{"checked", t.checked}, {"passed", t.passed}};
  }
  return {{"checks", checks}, {"repairs", r.repairs.size()}};
}

ValidationReport report_from(const nlohmann::json& j) {
  ValidationReport r;
  for (Check c : kAllChecks) {
    const auto& t = j.at("checks").at(to_string(c));
    r.tally[static_cast<std::size_t>(c)] = {t.at("checked").get<std::size_t>(), t.at("passed").get<std::size_t>()};
  }
  // Only the repair count is serialized.
  r.repairs.assign(j.at("repairs").get<std::size_t>(), std::string{});
  return r;
}

ordered_json stats_json(const GenerationStats& s) {
  ordered_json j;
  j["generation"] = s.generation;
  j["best"] = s.best;
  j["mean"] = s.mean;
  j["sd"] = s.sd;
  j["best_so_far"] = s.best_so_far;
  j["validation"] = report_json(s.validation);
  return j;
}

GenerationStats stats_from(const nlohmann::json& j) {
  GenerationStats s;
  s.generation = j.at("generation").get<std::size_t>();
  s.best = j.at("best").get<double>();
  s.mean = j.at("mean").get<double>();
  s.sd = j.at("sd").get<double>();
  s.best_so_far = j.at("best_so_far").get<double>();
  s.validation = report_from(j.at("validation"));
  return s;
}

}  // namespace

std::string to_json(const RunResult& r) {
  ordered_json j;
  j["run_id"] = r.run_id;
  j["objective"] = r.objective;
  j["init_mode"] = r.init_mode;
  j["reproduction"] = r.reproduction;
  j["seed"] = r.seed;
  j["k"] = r.k;
  j["population"] = r.population;
  j["generations"] = r.generations;
  j["working_nodes"] = r.working_nodes;
  j["working_edges"] = r.working_edges;
  j["best_fitness"] = r.best_fitness;
  j["best_original_fitness"] = r.best_original_fitness;
  j["best_working_labels"] = r.best_working_labels;
  j["best_original_labels"] = r.best_original_labels;
  j["initial"] = stats_json(r.initial);
  auto& trace = j["trace"] = ordered_json::array();
  for (const auto& s : r.trace) trace.push_back(stats_json(s));
  j["validation"] = report_json(r.validation);
  auto& muts = j["mutations"] = ordered_json::array();
  for (const auto& m : r.mutations) {
    muts.push_back({{"generation", m.generation},
                    {"mode", m.mode},
                    {"removed", m.removed},
                    {"added", m.added},
                    {"removed_degree", m.removed_degree},
                    {"added_degree", m.added_degree}});
  }
  j["events"] = r.events;
  j["final_population"] = r.final_population;
  j["gateway_calls"] = r.gateway_calls;
  j["fitness_evaluations"] = r.fitness_evaluations;
  return j.dump(2) + "\n";
}

RunResult run_result_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("run result is not valid JSON");
  RunResult r;
  try {
    r.run_id = j.at("run_id").get<std::string>();
    r.objective = j.at("objective").get<std::string>();
    r.init_mode = j.at("init_mode").get<std::string>();
    r.reproduction = j.at("reproduction").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.k = j.at("k").get<std::size_t>();
    r.population = j.at("population").get<std::size_t>();
    r.generations = j.at("generations").get<std::size_t>();
    r.working_nodes = j.at("working_nodes").get<std::size_t>();
    r.working_edges = j.at("working_edges").get<std::size_t>();
    r.best_fitness = j.at("best_fitness").get<double>();
    r.best_original_fitness = j.at("best_original_fitness").get<double>();
    r.best_working_labels = j.at("best_working_labels").get<std::vector<std::string>>();
    r.best_original_labels = j.at("best_original_labels").get<std::vector<std::string>>();
    r.initial = stats_from(j.at("initial"));
    for (const auto& s : j.at("trace")) r.trace.push_back(stats_from(s));
    r.validation = report_from(j.at("validation"));
    for (const auto& m : j.at("mutations")) {
      r.mutations.push_back({m.at("generation").get<std::size_t>(), m.at("mode").get<std::string>(),
                             m.at("removed").get<std::string>(), m.at("added").get<std::string>(),
                             m.at("removed_degree").get<std::size_t>(), m.at("added_degree").get<std::size_t>()});
    }
    r.events = j.at("events").get<std::vector<std::string>>();
    r.final_population = j.at("final_population").get<std::vector<std::vector<std::string>>>();
    r.gateway_calls = j.at("gateway_calls").get<std::size_t>();
    r.fitness_evaluations = j.at("fitness_evaluations").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed run result: ") + e.what());
  }
  return r;
}

}  // namespace veo
