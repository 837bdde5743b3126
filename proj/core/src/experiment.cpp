#include "veo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"

#include "veo/error.hpp"
#include "veo/hashing.hpp"
#include "veo/live_backend.hpp"
#include "veo/mock_oracle.hpp"
#include "veo/raster.hpp"
#include "veo/reports.hpp"
#include "veo/seeding.hpp"

namespace veo {

namespace fs = std::filesystem;

namespace {

std::uint64_t stable_hash64(const std::string& text) {
  const auto hex = sha256_hex(text);
  return std::stoull(hex.substr(0, 16), nullptr, 16);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool safe_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  }) && s != "." && s != "..";
}

fs::path run_file(const fs::path& out, const std::string& net, const std::string& arm, std::size_t r) {
  return out / "runs" / net / arm / ("run_" + std::to_string(r) + ".json");
}

fs::path transcript_file(const fs::path& out, const std::string& net, const std::string& arm, std::size_t r) {
  return out / "transcripts" / net / arm / ("run_" + std::to_string(r) + ".jsonl");
}

std::string trace_jsonl(const RunResult& r) {
  std::string out;
  for (const auto& g : r.trace) {
    nlohmann::ordered_json j;
    j["generation"] = g.generation;
    j["best"] = g.best;
    j["mean"] = g.mean;
    j["sd"] = g.sd;
    j["best_so_far"] = g.best_so_far;
    auto& checks = j["validation"] = nlohmann::ordered_json::object();
    for (Check c : kAllChecks) checks[to_string(c)] = {g.validation[c].checked, g.validation[c].passed};
    out += j.dump() + "\n";
  }
  return out;
}

RunRecord execute_run(const ExperimentConfig& cfg, const PreparedNetwork& net, const std::string& arm, std::size_t rep) {
  RunRecord rec{net.name, arm, rep, run_seed(cfg.seed, net.name, rep), std::nullopt, {}};
  EngineConfig e = cfg.engine;
  e.rng_seed = rec.seed;
  e.run_id = net.name + "/" + arm + "/run_" + std::to_string(rep);
  if (cfg.save_images) e.image_dir = cfg.out / "images";
  e.layout_cache_dir = cfg.out / "layouts";

  std::unique_ptr<Gateway> gateway;
  if (e.uses_gateway()) {
    std::shared_ptr<VisionChatBackend> backend;
    if (cfg.backend == "mock") {
      std::vector<std::string> shown;
      for (NodeIndex w = 0; w < net.working.graph.node_count(); ++w) {
        shown.push_back(net.original.label(net.working.to_original[w]));
      }
      backend = std::make_shared<MockOracle>(net.working.graph, NodeNames(std::move(shown)),
                                             MockOracleConfig{derive_seed(rec.seed, 0x6d6f636b), cfg.faults});
    } else {
      backend = std::make_shared<LiveBackend>(cfg.live);
    }
    const auto transcript = transcript_file(cfg.out, net.name, arm, rep);
    fs::remove(transcript);
    gateway = std::make_unique<Gateway>(backend, GatewayOptions{cfg.max_inflight, cfg.requests_per_second, transcript});
  }
  auto result = evolve(net.original, net.working, e, gateway.get());
  write_text(run_file(cfg.out, net.name, arm, rep), to_json(result));
  write_text(run_file(cfg.out, net.name, arm, rep).replace_extension(".trace.jsonl"), trace_jsonl(result));
  rec.result = std::move(result);
  return rec;
}

}  // namespace

std::string network_name(const fs::path& path) { return path.stem().string(); }

std::uint64_t run_seed(std::uint64_t base, const std::string& network, std::size_t rep) {
  return derive_seed(derive_seed(base, stable_hash64(network)), rep);
}

PreparedNetwork prepare_network(const fs::path& path, const SparsifySettings& settings, std::uint64_t seed) {
  PreparedNetwork net;
  net.name = network_name(path);
  net.original = load_edge_list(path).graph;
  auto cs = detect_fastgreedy(net.original);
  cs = merge_small(net.original, cs, settings.small_fraction);
  if (settings.n_c > 0 && cs.size() > settings.n_c) cs = merge_to_target(net.original, cs, settings.n_c);
  net.communities = cs;
  net.working = sparsify_if_large(net.original, cs, {settings.n_v, settings.n_e, settings.prune, seed, settings.relabel});
  return net;
}

std::vector<Arm> effective_arms(const ExperimentConfig& cfg) {
  if (cfg.arms.empty()) return {Arm{"default", {}}};
  return cfg.arms;
}

StatsSummary summarize(const std::vector<std::string>& networks, const std::vector<std::string>& arms,
                       const std::vector<RunRecord>& runs, double alpha, const std::string& reference_arm) {
  StatsSummary s;
  s.arms = arms;
  s.alpha = alpha;
  s.reference_arm = reference_arm.empty() && !arms.empty() ? arms.front() : reference_arm;
  std::vector<std::vector<double>> means_per_network;
  for (const auto& net : networks) {
    NetworkStats ns;
    ns.network = net;
    for (const auto& arm : arms) {
      ArmStats as;
      as.arm = arm;
      for (const auto& rec : runs) {
        if (rec.network != net || rec.arm != arm) continue;
        if (rec.result) {
          as.finals.push_back(rec.result->best_fitness);
        } else {
          ++as.failures;
        }
      }
      as.runs = as.finals.size();
      as.mean = as.finals.empty() ? std::nan("") : mean(as.finals);
      as.sd = sample_sd(as.finals);
      ns.arms.push_back(std::move(as));
    }
    const auto n = ns.arms.size();
    ns.pairwise.assign(n, std::vector<std::optional<RankSumResult>>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || ns.arms[i].runs < 3 || ns.arms[j].runs < 3) continue;
        ns.pairwise[i][j] = wilcoxon_rank_sum(ns.arms[i].finals, ns.arms[j].finals, alpha);
      }
    }
    std::vector<std::vector<double>> groups;
    for (const auto& a : ns.arms) groups.push_back(a.finals);
    const bool anova_ok = n >= 2 && std::all_of(groups.begin(), groups.end(), [](const auto& g) { return g.size() >= 2; });
    if (anova_ok) ns.anova = anova_oneway(groups, alpha);
    std::vector<double> row;
    for (const auto& a : ns.arms) row.push_back(std::isnan(a.mean) ? -INFINITY : a.mean);
    means_per_network.push_back(std::move(row));
    s.networks.push_back(std::move(ns));
  }
  if (!means_per_network.empty()) s.average_rank = mean_rank_per_arm(means_per_network);
  return s;
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  const auto arms = effective_arms(cfg);
  std::set<std::string> seen;
  for (const auto& a : arms) {
    if (!safe_name(a.name)) throw ConfigError("arm name '" + a.name + "' must use letters, digits, '_', '-' or '.'");
    if (!seen.insert(a.name).second) throw ConfigError("duplicate arm name '" + a.name + "'");
  }
  std::vector<ExperimentConfig> arm_cfgs;
  for (const auto& a : arms) arm_cfgs.push_back(cfg.for_arm(a));

  std::mutex log_mutex;
  auto say = [&](const std::string& line) {
    if (!log) return;
    std::lock_guard lock(log_mutex);
    *log << line << '\n';
  };

  ExperimentOutcome outcome;
  for (const auto& a : arms) outcome.arms.push_back(a.name);
  std::vector<PreparedNetwork> nets;
  seen.clear();
  for (const auto& path : cfg.networks) {
    const auto name = network_name(path);
    if (!safe_name(name)) throw ConfigError("network name '" + name + "' must use letters, digits, '_', '-' or '.'");
    if (!seen.insert(name).second) throw ConfigError("two networks share the name '" + name + "'");
    nets.push_back(prepare_network(path, cfg.sparsify, derive_seed(cfg.seed, stable_hash64(name) ^ 0x5a)));
    const auto& w = nets.back().working;
    say(name + ": " + std::to_string(nets.back().original.node_count()) + " nodes, working graph " +
        std::to_string(w.graph.node_count()) + " nodes / " + std::to_string(w.graph.edge_count()) + " edges");
    outcome.networks.push_back(name);
  }

  fs::create_directories(cfg.out);
  write_text(cfg.out / "config.json", cfg.to_json() + "\n");

  struct Task {
    std::size_t net, arm, rep;
  };
  std::vector<Task> tasks;
  for (std::size_t n = 0; n < nets.size(); ++n) {
    for (std::size_t a = 0; a < arms.size(); ++a) {
      for (std::size_t r = 0; r < cfg.runs; ++r) tasks.push_back({n, a, r});
    }
  }
  std::vector<RunRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto& t = tasks[i];
      const auto& net = nets[t.net];
      const auto& arm = arms[t.arm].name;
      try {
        records[i] = execute_run(arm_cfgs[t.arm], net, arm, t.rep);
        say(net.name + "/" + arm + "/run_" + std::to_string(t.rep) + ": best " +
            format_number(records[i].result->best_fitness));
      } catch (const std::exception& ex) {
        records[i] = RunRecord{net.name, arm, t.rep, run_seed(cfg.seed, net.name, t.rep), std::nullopt, ex.what()};
        say(net.name + "/" + arm + "/run_" + std::to_string(t.rep) + ": failed: " + ex.what());
      }
    }
  };
  const auto jobs = std::min(cfg.jobs, std::max<std::size_t>(1, tasks.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  outcome.runs = std::move(records);
  outcome.summary = summarize(outcome.networks, outcome.arms, outcome.runs, cfg.alpha, cfg.reference_arm);
  emit_reports(cfg.out, cfg, outcome);

  std::string dead;
  for (const auto& ns : outcome.summary.networks) {
    for (const auto& as : ns.arms) {
      if (as.runs == 0) dead += (dead.empty() ? "" : ", ") + ns.network + "/" + as.arm;
    }
  }
  if (!dead.empty()) throw Error("every repetition failed for " + dead);
  return outcome;
}

ExperimentOutcome load_outcome(const fs::path& out) {
  const auto cfg = parse_experiment_config(read_text(out / "config.json"));
  ExperimentOutcome outcome;
  for (const auto& a : effective_arms(cfg)) outcome.arms.push_back(a.name);
  for (const auto& p : cfg.networks) outcome.networks.push_back(network_name(p));
  for (const auto& net : outcome.networks) {
    for (const auto& arm : outcome.arms) {
      for (std::size_t r = 0; r < cfg.runs; ++r) {
        RunRecord rec{net, arm, r, run_seed(cfg.seed, net, r), std::nullopt, {}};
        const auto path = run_file(out, net, arm, r);
        if (fs::exists(path)) {
          rec.result = run_result_from_json(read_text(path));
        } else {
          rec.error = "missing " + path.string();
        }
        outcome.runs.push_back(std::move(rec));
      }
    }
  }
  outcome.summary = summarize(outcome.networks, outcome.arms, outcome.runs, cfg.alpha, cfg.reference_arm);
  return outcome;
}

namespace {

std::vector<TraceRow> aggregate_trace(const std::vector<const RunResult*>& results) {
  std::vector<TraceRow> rows;
  if (results.empty()) return rows;
  std::size_t generations = results.front()->trace.size();
  for (const auto* r : results) generations = std::min(generations, r->trace.size());
  const double n = static_cast<double>(results.size());
  for (std::size_t g = 0; g < generations; ++g) {
    std::vector<double> best, avg, bsf;
    for (const auto* r : results) {
      best.push_back(r->trace[g].best);
      avg.push_back(r->trace[g].mean);
      bsf.push_back(r->trace[g].best_so_far);
    }
    rows.push_back({results.front()->trace[g].generation, results.size(), mean(best), sample_sd(best) / std::sqrt(n),
                    mean(avg), mean(bsf), sample_sd(bsf) / std::sqrt(n)});
  }
  return rows;
}

// Mean best-so-far per arm, one polyline each.
Image plot_traces(const std::vector<std::pair<std::string, std::vector<TraceRow>>>& series) {
  constexpr int W = 800, H = 500, L = 80, R = 20, T = 20, B = 40;
  static const Rgb palette[] = {{0x2F, 0x7F, 0xC1}, {0xD6, 0x27, 0x28}, {0x2C, 0xA0, 0x2C},
                                {0xFF, 0x7F, 0x0E}, {0x94, 0x67, 0xBD}, {0x8C, 0x56, 0x4B}};
  const Rgb ink{0x33, 0x33, 0x33};
  Image img(W, H, {255, 255, 255});
  double lo = INFINITY, hi = -INFINITY;
  std::size_t gmax = 1;
  for (const auto& [name, rows] : series) {
    for (const auto& r : rows) {
      lo = std::min(lo, r.mean_best_so_far);
      hi = std::max(hi, r.mean_best_so_far);
      gmax = std::max(gmax, r.generation);
    }
  }
  if (!(hi > lo)) {
    lo = std::isfinite(lo) ? lo - 1.0 : 0.0;
    hi = lo + 2.0;
  }
  draw_line(img, L, T, L, H - B, 1, ink);
  draw_line(img, L, H - B, W - R, H - B, 1, ink);
  auto px = [&](std::size_t g) { return L + (W - L - R) * static_cast<double>(g) / static_cast<double>(gmax); };
  auto py = [&](double v) { return (H - B) - (H - B - T) * (v - lo) / (hi - lo); };
  draw_text(img, format_number(hi), 4, T, 1, ink);
  draw_text(img, format_number(lo), 4, H - B - 7, 1, ink);
  draw_text(img, std::to_string(gmax), W - R - 12, H - B + 8, 1, ink);
  int legend_w = 0;
  for (const auto& [name, rows] : series) legend_w = std::max(legend_w, text_width(name, 2));
  const int legend_x = W - R - legend_w - 18;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto c = palette[s % std::size(palette)];
    const auto& rows = series[s].second;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      draw_line(img, px(rows[i - 1].generation), py(rows[i - 1].mean_best_so_far), px(rows[i].generation),
                py(rows[i].mean_best_so_far), 2, c);
    }
    const int y = H - B - 20 - static_cast<int>(series.size() - s) * 18;
    fill_rect(img, legend_x, y, 12, 12, c);
    draw_text(img, series[s].first, legend_x + 18, y - 1, 2, ink);
  }
  return img;
}

}  // namespace

void emit_reports(const fs::path& out, const ExperimentConfig& cfg, const ExperimentOutcome& outcome) {
  if (outcome.runs.empty()) throw Error("no runs to report");
  const auto dir = out / "reports";
  fs::create_directories(dir);
  const auto& summary = outcome.summary;

  std::vector<FinalResultRow> finals;
  std::vector<DegreeLogRow> degrees;
  for (const auto& rec : outcome.runs) {
    if (!rec.result) continue;
    const auto& r = *rec.result;
    finals.push_back({rec.network, rec.arm, rec.run, rec.seed, r.best_fitness, r.best_original_fitness,
                      r.best_original_labels});
    for (const auto& m : r.mutations) {
      degrees.push_back({rec.network, rec.arm, rec.run, m.generation, m.mode, m.removed, m.added, m.removed_degree,
                         m.added_degree});
    }
  }
  write_rows(finals, dir / "final_results.csv");
  write_rows(degrees, dir / "degree_log.csv");

  std::vector<FitnessTableRow> table;
  std::vector<AnovaRow> anova;
  std::vector<ValidationGridRow> grid;
  for (const auto& ns : summary.networks) {
    std::size_t ref = 0;
    for (std::size_t i = 0; i < ns.arms.size(); ++i) {
      if (ns.arms[i].arm == summary.reference_arm) ref = i;
    }
    std::vector<std::pair<std::string, std::vector<TraceRow>>> series;
    for (std::size_t i = 0; i < ns.arms.size(); ++i) {
      const auto& as = ns.arms[i];
      FitnessTableRow row{ns.network, as.arm, as.runs, as.mean, as.sd, "ref", 1.0};
      if (i != ref) {
        if (const auto& w = ns.pairwise[i][ref]) {
          row.decision = symbol(w->decision);
          row.p = w->p;
        } else {
          row.decision = "n/a";
          row.p = std::nan("");
        }
      }
      table.push_back(row);

      std::vector<const RunResult*> results;
      ValidationReport merged;
      for (const auto& rec : outcome.runs) {
        if (rec.network == ns.network && rec.arm == as.arm && rec.result) {
          results.push_back(&*rec.result);
          merged.merge(rec.result->validation);
        }
      }
      auto trace = aggregate_trace(results);
      write_rows(trace, dir / ("trace_" + ns.network + "_" + as.arm + ".csv"));
      series.emplace_back(as.arm, std::move(trace));

      ValidationGridRow g{ns.network, as.arm, {}};
      for (Check c : kAllChecks) {
        const auto& t = merged[c];
        if (t.checked > 0) g.pass_rate[static_cast<std::size_t>(c)] = 100.0 * t.passed / t.checked;
      }
      grid.push_back(g);
    }
    if (ns.anova) anova.push_back({ns.network, ns.anova->f, ns.anova->p, ns.anova->different});
    write_png(plot_traces(series), dir / ("trace_" + ns.network + ".png"));
  }
  write_rows(table, dir / "fitness_table.csv");
  write_rows(anova, dir / "anova.csv");
  write_rows(grid, dir / "validation_grid.csv");

  std::vector<RankRow> ranks;
  for (std::size_t i = 0; i < summary.average_rank.size(); ++i) ranks.push_back({summary.arms[i], summary.average_rank[i]});
  write_rows(ranks, dir / "ranks.csv");

  // Latency per (backend, model, role) from the gateway transcripts.
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> latency;
  for (const auto& rec : outcome.runs) {
    const auto path = transcript_file(out, rec.network, rec.arm, rec.run);
    if (!fs::exists(path)) continue;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.value("ok", false)) continue;
      latency[{j.value("backend", ""), j.value("model", ""), j.value("role", "")}].push_back(j.value("latency_s", 0.0));
    }
  }
  std::vector<LatencyRow> lat;
  for (const auto& [key, xs] : latency) {
    lat.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), xs.size(), mean(xs), sample_sd(xs)});
  }
  write_rows(lat, dir / "latency.csv");

  nlohmann::ordered_json js;
  js["config_hash"] = cfg.hash();
  js["alpha"] = summary.alpha;
  js["reference_arm"] = summary.reference_arm;
  js["arms"] = summary.arms;
  js["average_rank"] = summary.average_rank;
  auto& nets = js["networks"] = nlohmann::ordered_json::array();
  for (const auto& ns : summary.networks) {
    nlohmann::ordered_json n;
    n["network"] = ns.network;
    auto& arms = n["arms"] = nlohmann::ordered_json::array();
    for (const auto& as : ns.arms) {
      arms.push_back({{"arm", as.arm}, {"runs", as.runs}, {"failures", as.failures},
                      {"mean", as.runs ? nlohmann::ordered_json(as.mean) : nlohmann::ordered_json()},
                      {"sd", as.sd}});
    }
    auto& pw = n["decisions"] = nlohmann::ordered_json::array();
    for (const auto& row : ns.pairwise) {
      auto r = nlohmann::ordered_json::array();
      for (const auto& cell : row) r.push_back(cell ? nlohmann::ordered_json(symbol(cell->decision)) : nlohmann::ordered_json());
      pw.push_back(r);
    }
    if (ns.anova) {
      n["anova"] = {{"f", ns.anova->f}, {"p", ns.anova->p}, {"different", ns.anova->different}};
    } else {
      n["anova"] = nullptr;
    }
    nets.push_back(n);
  }
  auto& failures = js["failures"] = nlohmann::ordered_json::array();
  for (const auto& rec : outcome.runs) {
    if (!rec.result) failures.push_back({{"network", rec.network}, {"arm", rec.arm}, {"run", rec.run}, {"error", rec.error}});
  }
  write_text(dir / "summary.json", js.dump(2) + "\n");

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(out)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), out);
    if (rel == "manifest.json") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  nlohmann::ordered_json manifest;
  manifest["config_hash"] = cfg.hash();
  auto& list = manifest["files"] = nlohmann::ordered_json::array();
  for (const auto& rel : files) {
    const auto text = read_text(out / rel);
    list.push_back({{"path", rel.generic_string()}, {"bytes", text.size()}, {"sha256", sha256_hex(text)}});
  }
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace veo
