#include "veo/engine.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "veo/error.hpp"
#include "veo/response_parse.hpp"
#include "veo/seeding.hpp"

namespace veo {

InitMode parse_init_mode(const std::string& name) {
  if (name == "random") return InitMode::random;
  if (name == "refined_random") return InitMode::refined_random;
  if (name == "high_degree") return InitMode::high_degree;
  if (name == "high_betweenness") return InitMode::high_betweenness;
  if (name == "mllm") return InitMode::mllm;
  throw ConfigError("unknown init mode '" + name +
                    "' (expected random, refined_random, high_degree, high_betweenness or mllm)");
}

std::string to_string(InitMode mode) {
  switch (mode) {
    case InitMode::random: return "random";
    case InitMode::refined_random: return "refined_random";
    case InitMode::high_degree: return "high_degree";
    case InitMode::high_betweenness: return "high_betweenness";
    case InitMode::mllm: return "mllm";
  }
  return "random";
}

Reproduction parse_reproduction(const std::string& name) {
  if (name == "normal") return Reproduction::normal;
  if (name == "mllm_oneshot" || name == "oneshot") return Reproduction::mllm_oneshot;
  if (name == "mllm_twophase" || name == "twophase") return Reproduction::mllm_twophase;
  throw ConfigError("unknown reproduction mode '" + name + "' (expected normal, mllm_oneshot or mllm_twophase)");
}

std::string to_string(Reproduction mode) {
  switch (mode) {
    case Reproduction::normal: return "normal";
    case Reproduction::mllm_oneshot: return "mllm_oneshot";
    case Reproduction::mllm_twophase: return "mllm_twophase";
  }
  return "normal";
}

FitnessGraph parse_fitness_graph(const std::string& name) {
  if (name == "working") return FitnessGraph::working;
  if (name == "original") return FitnessGraph::original;
  throw ConfigError("unknown fitness graph '" + name + "' (expected working or original)");
}

std::string to_string(FitnessGraph g) { return g == FitnessGraph::working ? "working" : "original"; }

void EngineConfig::validate(std::size_t working_nodes) const {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (k < 1) throw ConfigError("k must be at least 1");
  if (population < 2) throw ConfigError("population must be at least 2");
  if (!unit(p_c) || !unit(p_m) || !unit(p)) throw ConfigError("p_c, p_m and p must lie in [0, 1]");
  if (k > working_nodes) {
    throw ConfigError("k = " + std::to_string(k) + " exceeds the " + std::to_string(working_nodes) +
                      " nodes of the working graph");
  }
  if (objective == Objective::ic_spread && ic_trials == 0) throw ConfigError("ic_trials must be at least 1");
  if (temperature < 0.0) throw ConfigError("temperature must not be negative");
}

std::pair<std::size_t, std::size_t> select_parents(std::span<const double> fitness, std::mt19937_64& rng) {
  const std::size_t n = fitness.size();
  if (n < 2) throw ConfigError("selection needs at least two individuals");
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  auto tournament = [&] {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (fitness[i] > fitness[j]) return i;
    if (fitness[j] > fitness[i]) return j;
    return std::min(i, j);
  };
  const std::size_t a = tournament();
  std::size_t b = tournament();
  while (b == a) b = tournament();
  return {a, b};
}

Engine::Engine(const Graph& original, const SparsifiedGraph& working, EngineConfig config, Gateway* gateway)
    : original_(original), working_(working), config_(std::move(config)), gateway_(gateway), rng_(config_.rng_seed) {
  config_.validate(working_.graph.node_count());
  if (working_.to_original.size() != working_.graph.node_count()) {
    throw GraphError("working graph mapping does not cover its nodes");
  }
  if (config_.uses_gateway() && !gateway_) throw ConfigError("an MLLM mode is configured but no gateway was given");
  std::vector<std::string> shown;
  shown.reserve(working_.graph.node_count());
  to_working_.assign(original_.node_count(), std::nullopt);
  for (NodeIndex w = 0; w < working_.graph.node_count(); ++w) {
    const NodeIndex o = working_.to_original[w];
    if (o >= original_.node_count()) throw GraphError("working graph maps outside the original graph");
    shown.push_back(original_.label(o));
    to_working_[o] = w;
  }
  shown_ = NodeNames(std::move(shown));
  fitness_spec_ = {config_.objective, config_.p, config_.ic_trials, derive_seed(config_.rng_seed, 0x1c)};
}

const Graph& Engine::search_graph() const {
  return config_.fitness_graph == FitnessGraph::original ? original_ : working_.graph;
}

double Engine::evaluate(const SeedSet& s) { return cache_.get_or_compute(search_graph(), s, fitness_spec_).value; }

std::vector<NodeIndex> Engine::project(const SeedSet& s) const {
  if (config_.fitness_graph == FitnessGraph::working) return s.members();
  std::vector<NodeIndex> out;
  for (NodeIndex v : s.members()) {
    if (to_working_[v]) out.push_back(*to_working_[v]);
  }
  return out;
}

NodeIndex Engine::lift(NodeIndex w) const {
  return config_.fitness_graph == FitnessGraph::working ? w : working_.to_original[w];
}

std::vector<std::string> Engine::shown_labels(const std::vector<NodeIndex>& working) const {
  std::vector<std::string> out;
  out.reserve(working.size());
  for (NodeIndex w : working) out.push_back(shown_.label(w));
  return out;
}

SeedSet Engine::random_solution(std::span<const NodeIndex> pool) {
  std::vector<NodeIndex> items(pool.begin(), pool.end());
  const std::size_t k = std::min(config_.k, items.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
    std::swap(items[i], items[pick(rng_)]);
  }
  items.resize(k);
  return SeedSet(std::move(items));
}

SeedSet Engine::sample_init(InitMode mode) {
  const Graph& w = working_.graph;
  auto lifted = [&](const SeedSet& s) {
    std::vector<NodeIndex> out;
    for (NodeIndex v : s.members()) out.push_back(lift(v));
    return SeedSet(std::move(out));
  };
  switch (mode) {
    case InitMode::random: {
      // Uniform over the original graph; nodes missing from the working
      // graph are redrawn unless fitness is computed on the original.
      std::uniform_int_distribution<NodeIndex> pick(0, static_cast<NodeIndex>(original_.node_count() - 1));
      std::vector<NodeIndex> chosen;
      std::unordered_set<NodeIndex> used;
      while (chosen.size() < config_.k) {
        const NodeIndex o = pick(rng_);
        NodeIndex v = o;
        if (config_.fitness_graph == FitnessGraph::working) {
          if (!to_working_[o]) continue;
          v = *to_working_[o];
        }
        if (used.insert(v).second) chosen.push_back(v);
      }
      return SeedSet(std::move(chosen));
    }
    case InitMode::refined_random:
    case InitMode::mllm: {
      std::vector<NodeIndex> all(w.node_count());
      for (NodeIndex v = 0; v < all.size(); ++v) all[v] = v;
      return lifted(random_solution(all));
    }
    case InitMode::high_degree:
    case InitMode::high_betweenness: {
      const auto score = mode == InitMode::high_degree ? degrees_as_scores(w) : ranking_betweenness(w);
      auto ranked = rank_descending(score);
      ranked.resize(std::min(ranked.size(), 2 * config_.k));
      return lifted(random_solution(ranked));
    }
  }
  throw ConfigError("unknown init mode");
}

const Layout& Engine::layout() {
  if (!layout_) {
    const std::uint64_t seed = config_.layout == LayoutStyle::kamada_kawai ? 0 : config_.rng_seed;
    const CanvasFit fit{config_.render.width, config_.render.height, 0.08};
    layout_ = config_.layout_cache_dir.empty()
                  ? compute_layout(working_.graph, config_.layout, seed, fit)
                  : cached_layout(working_.graph, config_.layout, seed, config_.layout_cache_dir, fit);
  }
  return *layout_;
}

Image Engine::render(const std::vector<NodeIndex>& working_solution, Phase phase, const std::string& tag) {
  auto img = render_solution_image(working_.graph, layout(), config_.render, SeedSet(working_solution), phase,
                                   shown_.labels());
  if (!config_.image_dir.empty()) {
    write_png(img, config_.image_dir / config_.run_id / std::to_string(generation_) / (tag + ".png"));
  }
  return img;
}

GatewayResponse Engine::call(const OperatorTask& task, std::vector<Image> images) {
  ++gateway_calls_;
  return gateway_->complete_with_images(make_request(task, std::move(images), config_.model_id, config_.temperature));
}

std::optional<SeedSet> Engine::mllm_init(OperatorRole role) {
  OperatorTask task;
  task.role = role;
  task.k = config_.k;
  std::vector<std::string> candidate;
  try {
    auto image = render({}, Phase::init, "init_" + to_string(role));
    const auto response = call(task, {std::move(image)});
    candidate = parse_node_list(response.text);
  } catch (const ParseError& e) {
    events_.push_back("init " + to_string(role) + ": unparseable reply, repaired: " + e.what());
  } catch (const GatewayError& e) {
    events_.push_back("init " + to_string(role) + ": gateway failed, refined_random fallback: " + e.what());
    return std::nullopt;
  }
  ValidationContext ctx;
  ctx.phase = Phase::init;
  ctx.k = config_.k;
  ctx.graph = &working_.graph;
  ctx.names = &shown_;
  ctx.strictness = config_.strictness;
  auto checked = validate_and_repair(candidate, ctx, rng_);
  generation_report_.merge(checked.report);
  std::vector<NodeIndex> out;
  for (NodeIndex v : checked.solution.members()) out.push_back(lift(v));
  return SeedSet(std::move(out));
}

std::vector<Individual> Engine::initialize_population() {
  generation_ = 0;
  std::vector<Individual> population;
  auto is_duplicate = [&](const SeedSet& s) {
    return std::any_of(population.begin(), population.end(), [&](const Individual& i) { return i.solution == s; });
  };
  auto produce = [&](auto&& make) {
    Individual ind;
    for (std::size_t attempt = 0;; ++attempt) {
      auto [solution, origin] = make();
      ind.solution = std::move(solution);
      ind.origin = std::move(origin);
      if (!is_duplicate(ind.solution) || attempt >= config_.dedupe_retries) break;
    }
    ind.fitness = evaluate(ind.solution);
    population.push_back(std::move(ind));
  };

  if (config_.init_mode == InitMode::mllm) {
    const std::size_t quota = (config_.population + 2) / 3;
    for (auto role : {OperatorRole::init_intelligent, OperatorRole::init_betweenness_spread,
                      OperatorRole::init_degree_central}) {
      for (std::size_t q = 0; q < quota && population.size() < config_.population; ++q) {
        produce([&]() -> std::pair<SeedSet, std::string> {
          if (auto s = mllm_init(role)) return {std::move(*s), "init:" + to_string(role)};
          return {sample_init(InitMode::refined_random), "init:fallback_refined_random"};
        });
      }
    }
  } else {
    while (population.size() < config_.population) {
      produce([&]() -> std::pair<SeedSet, std::string> {
        return {sample_init(config_.init_mode), "init:" + to_string(config_.init_mode)};
      });
    }
  }
  return population;
}

Individual Engine::normal_crossover(const Individual& a, const Individual& b) {
  const auto& ma = a.solution.members();
  const auto& mb = b.solution.members();
  std::bernoulli_distribution coin(0.5);
  std::vector<NodeIndex> chosen;
  std::unordered_set<NodeIndex> used;
  for (std::size_t i = 0; i < config_.k; ++i) {
    const NodeIndex v = coin(rng_) ? ma[i] : mb[i];
    if (used.insert(v).second) chosen.push_back(v);
  }
  std::vector<NodeIndex> pool;
  std::set_union(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(pool));
  std::shuffle(pool.begin(), pool.end(), rng_);
  for (NodeIndex v : pool) {
    if (chosen.size() >= config_.k) break;
    if (used.insert(v).second) chosen.push_back(v);
  }
  const auto n = static_cast<NodeIndex>(search_graph().node_count());
  std::uniform_int_distribution<NodeIndex> pick(0, n - 1);
  while (chosen.size() < config_.k) {
    const NodeIndex v = pick(rng_);
    if (used.insert(v).second) chosen.push_back(v);
  }
  return {SeedSet(std::move(chosen)), std::numeric_limits<double>::quiet_NaN(), "crossover:normal"};
}

std::optional<Individual> Engine::mllm_crossover(const Individual& a, const Individual& b, std::size_t slot) {
  const auto pa = project(a.solution);
  const auto pb = project(b.solution);
  std::vector<NodeIndex> parent_union;
  std::set_union(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(parent_union));
  if (pa.empty() || pb.empty() || parent_union.size() < config_.k) {
    events_.push_back("gen " + std::to_string(generation_) + " slot " + std::to_string(slot) +
                      ": parents not visible in the working graph, normal crossover");
    return std::nullopt;
  }
  OperatorTask task;
  task.role = OperatorRole::crossover;
  task.k = config_.k;
  task.parent_a = shown_labels(pa);
  task.parent_b = shown_labels(pb);
  std::vector<std::string> candidate;
  try {
    std::vector<Image> images;
    images.push_back(render(pa, Phase::crossover, std::to_string(slot) + "_crossover_a"));
    images.push_back(render(pb, Phase::crossover, std::to_string(slot) + "_crossover_b"));
    candidate = parse_node_list(call(task, std::move(images)).text);
  } catch (const ParseError&) {
    events_.push_back("gen " + std::to_string(generation_) + " slot " + std::to_string(slot) +
                      ": unparseable crossover reply, repaired");
  } catch (const GatewayError& e) {
    events_.push_back("gen " + std::to_string(generation_) + " slot " + std::to_string(slot) +
                      ": crossover gateway failed, normal crossover: " + e.what());
    return std::nullopt;
  }
  ValidationContext ctx;
  ctx.phase = Phase::crossover;
  ctx.k = config_.k;
  ctx.graph = &working_.graph;
  ctx.names = &shown_;
  ctx.parent_union = parent_union;
  ctx.strictness = config_.strictness;
  auto checked = validate_and_repair(candidate, ctx, rng_);
  generation_report_.merge(checked.report);
  std::vector<NodeIndex> out;
  for (NodeIndex v : checked.solution.members()) out.push_back(lift(v));
  return Individual{SeedSet(std::move(out)), std::numeric_limits<double>::quiet_NaN(), "crossover:mllm"};
}

Individual Engine::crossover_step(const Individual& a, const Individual& b, std::size_t slot) {
  const bool cross = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < config_.p_c;
  if (!cross) {
    Individual clone = b.fitness > a.fitness ? b : a;
    clone.origin = "clone";
    return clone;
  }
  if (config_.reproduction != Reproduction::normal) {
    if (auto child = mllm_crossover(a, b, slot)) return std::move(*child);
  }
  return normal_crossover(a, b);
}

Individual Engine::normal_mutation(const Individual& ind) {
  const Graph& g = search_graph();
  if (ind.solution.size() >= g.node_count()) return ind;
  const auto& members = ind.solution.members();
  const NodeIndex out = members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng_)];
  std::uniform_int_distribution<NodeIndex> pick(0, static_cast<NodeIndex>(g.node_count() - 1));
  NodeIndex in = pick(rng_);
  while (ind.solution.contains(in)) in = pick(rng_);
  std::vector<NodeIndex> next;
  for (NodeIndex v : members) {
    if (v != out) next.push_back(v);
  }
  next.push_back(in);
  const bool on_working = config_.fitness_graph == FitnessGraph::working;
  mutations_.push_back({generation_, "normal", on_working ? shown_.label(out) : original_.label(out),
                        on_working ? shown_.label(in) : original_.label(in), g.degree(out), g.degree(in)});
  return {SeedSet(std::move(next)), std::numeric_limits<double>::quiet_NaN(), ind.origin + "+mutation:normal"};
}

std::optional<Individual> Engine::mllm_mutation(const Individual& ind, std::size_t slot) {
  const auto current = project(ind.solution);
  const std::string where = "gen " + std::to_string(generation_) + " slot " + std::to_string(slot);
  if (current.size() != config_.k || current.size() >= working_.graph.node_count()) {
    events_.push_back(where + ": solution not mutable in the working graph, normal mutation");
    return std::nullopt;
  }
  OperatorTask task;
  task.k = config_.k;
  task.current = shown_labels(current);
  std::string remove;
  std::string add;
  try {
    auto image = render(current, Phase::mutation, std::to_string(slot) + "_mutation");
    if (config_.reproduction == Reproduction::mllm_oneshot) {
      task.role = OperatorRole::mutation_oneshot;
      try {
        std::tie(remove, add) = parse_swap_pair(call(task, {std::move(image)}).text);
      } catch (const ParseError&) {
        events_.push_back(where + ": unparseable mutation reply, repaired");
      }
    } else {
      task.role = OperatorRole::mutation_remove;
      try {
        remove = parse_node_list(call(task, {image}).text).front();
      } catch (const ParseError&) {
        events_.push_back(where + ": unparseable removal reply, repaired");
      }
      task.role = OperatorRole::mutation_add;
      try {
        add = parse_node_list(call(task, {std::move(image)}).text).front();
      } catch (const ParseError&) {
        events_.push_back(where + ": unparseable addition reply, repaired");
      }
    }
  } catch (const GatewayError& e) {
    events_.push_back(where + ": mutation gateway failed, normal mutation: " + e.what());
    return std::nullopt;
  }
  ValidationContext ctx;
  ctx.phase = Phase::mutation;
  ctx.k = config_.k;
  ctx.graph = &working_.graph;
  ctx.names = &shown_;
  ctx.current = SeedSet(current);
  ctx.strictness = config_.strictness;
  auto swap = validate_swap(remove, add, ctx, rng_);
  generation_report_.merge(swap.report);
  if (!swap.applied) return ind;
  const Graph& g = search_graph();
  mutations_.push_back({generation_, to_string(config_.reproduction), shown_.label(swap.removed),
                        shown_.label(swap.added), g.degree(lift(swap.removed)), g.degree(lift(swap.added))});
  // Nodes of the individual that are not visible in the working graph stay.
  std::vector<NodeIndex> next;
  for (NodeIndex v : ind.solution.members()) {
    if (v != lift(swap.removed)) next.push_back(v);
  }
  next.push_back(lift(swap.added));
  return Individual{SeedSet(std::move(next)), std::numeric_limits<double>::quiet_NaN(),
                    ind.origin + "+mutation:" + to_string(config_.reproduction)};
}

Individual Engine::mutation_step(const Individual& ind, std::size_t slot) {
  const bool mutate = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < config_.p_m;
  if (!mutate) return ind;
  if (config_.reproduction != Reproduction::normal) {
    if (auto child = mllm_mutation(ind, slot)) return std::move(*child);
  }
  return normal_mutation(ind);
}

namespace {

GenerationStats summarize(std::size_t generation, const std::vector<Individual>& pop, double best_so_far) {
  GenerationStats s;
  s.generation = generation;
  s.best = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& ind : pop) {
    s.best = std::max(s.best, ind.fitness);
    sum += ind.fitness;
  }
  s.mean = sum / static_cast<double>(pop.size());
  double ss = 0.0;
  for (const auto& ind : pop) ss += (ind.fitness - s.mean) * (ind.fitness - s.mean);
  s.sd = pop.size() > 1 ? std::sqrt(ss / static_cast<double>(pop.size() - 1)) : 0.0;
  s.best_so_far = best_so_far;
  return s;
}

std::size_t best_index(const std::vector<Individual>& pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    if (pop[i].fitness > pop[best].fitness) best = i;
  }
  return best;
}

}  // namespace

RunResult Engine::run() {
  generation_report_ = {};
  auto population = initialize_population();
  Individual best = population[best_index(population)];
  RunResult result;
  result.initial = summarize(0, population, best.fitness);
  result.initial.validation = generation_report_;
  total_report_.merge(generation_report_);

  std::vector<double> fitness;
  for (std::size_t gen = 1; gen <= config_.generations; ++gen) {
    generation_ = gen;
    generation_report_ = {};
    fitness.clear();
    for (const auto& ind : population) fitness.push_back(ind.fitness);
    std::vector<Individual> offspring;
    offspring.reserve(population.size());
    for (std::size_t slot = 0; slot < population.size(); ++slot) {
      const auto [i, j] = select_parents(fitness, rng_);
      auto child = crossover_step(population[i], population[j], slot);
      child = mutation_step(child, slot);
      if (std::isnan(child.fitness)) child.fitness = evaluate(child.solution);
      offspring.push_back(std::move(child));
    }
    offspring[0] = best;
    population = std::move(offspring);
    const auto& gen_best = population[best_index(population)];
    if (gen_best.fitness > best.fitness) best = gen_best;
    auto stats = summarize(gen, population, best.fitness);
    stats.validation = generation_report_;
    total_report_.merge(generation_report_);
    result.trace.push_back(std::move(stats));
  }

  result.run_id = config_.run_id;
  result.objective = to_string(config_.objective);
  result.init_mode = to_string(config_.init_mode);
  result.reproduction = to_string(config_.reproduction);
  result.seed = config_.rng_seed;
  result.k = config_.k;
  result.population = config_.population;
  result.generations = config_.generations;
  result.working_nodes = working_.graph.node_count();
  result.working_edges = working_.graph.edge_count();
  std::vector<NodeIndex> best_original;
  for (NodeIndex v : best.solution.members()) {
    if (config_.fitness_graph == FitnessGraph::working) {
      result.best_working_labels.push_back(working_.graph.label(v));
      best_original.push_back(working_.to_original[v]);
    } else {
      if (to_working_[v]) result.best_working_labels.push_back(working_.graph.label(*to_working_[v]));
      best_original.push_back(v);
    }
  }
  const SeedSet original_seeds(best_original);
  result.best_original_labels = original_seeds.labels(original_);
  result.best_fitness = best.fitness;
  result.best_original_fitness = veo::evaluate(original_, original_seeds, fitness_spec_).value;
  result.validation = total_report_;
  result.mutations = mutations_;
  result.events = events_;
  for (const auto& ind : population) {
    std::vector<std::string> labels;
    for (NodeIndex v : ind.solution.members()) {
      labels.push_back(config_.fitness_graph == FitnessGraph::working ? shown_.label(v) : original_.label(v));
    }
    result.final_population.push_back(std::move(labels));
  }
  result.gateway_calls = gateway_calls_;
  result.fitness_evaluations = cache_.misses();
  return result;
}

RunResult evolve(const Graph& original, const SparsifiedGraph& working, const EngineConfig& config, Gateway* gateway) {
  Engine engine(original, working, config, gateway);
  return engine.run();
}

}  // namespace veo
