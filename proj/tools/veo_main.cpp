// veo: command-line front end for the pipeline stages and experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "veo/community.hpp"
#include "veo/error.hpp"
#include "veo/experiment.hpp"
#include "veo/experiment_config.hpp"
#include "veo/fitness.hpp"
#include "veo/graph.hpp"
#include "veo/layout.hpp"
#include "veo/render.hpp"
#include "veo/reports.hpp"
#include "veo/sparsify.hpp"
#include "veo/stats.hpp"

namespace {

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(veo::parse_number(item.substr(item.find_first_not_of(" \t"))));
  }
  return out;
}

std::vector<std::string> split_labels(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == ';') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

veo::CommunityStructure communities_for(const veo::Graph& g, double small_fraction, std::size_t n_c) {
  auto cs = veo::merge_small(g, veo::detect_fastgreedy(g), small_fraction);
  if (n_c > 0 && cs.size() > n_c) cs = veo::merge_to_target(g, cs, n_c);
  return cs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visual evolutionary optimization of seed sets on graphs"};
  app.require_subcommand(1);

  // communities
  auto* comm = app.add_subcommand("communities", "Detect and merge communities of an edge list");
  std::string comm_net, comm_out;
  double comm_frac = 0.02;
  std::size_t comm_target = 0;
  comm->add_option("--network", comm_net, "Edge list")->required()->check(CLI::ExistingFile);
  comm->add_option("--out", comm_out, "Write `label community` lines here instead of stdout");
  comm->add_option("--small-fraction", comm_frac, "Fold communities below this share of |V|");
  comm->add_option("--target", comm_target, "Merge down to this many communities (0 = off)");

  // sparsify
  auto* spar = app.add_subcommand("sparsify", "Reduce a graph to a working graph");
  std::string spar_net, spar_out = "veo_out", spar_prune = "random";
  veo::SparsifySettings spar_s;
  std::uint64_t spar_seed = 1;
  bool spar_keep_labels = false;
  spar->add_option("--network", spar_net, "Edge list")->required()->check(CLI::ExistingFile);
  spar->add_option("--out", spar_out, "Output directory");
  spar->add_option("--n-v", spar_s.n_v, "Node target");
  spar->add_option("--n-e", spar_s.n_e, "Edge target");
  spar->add_option("--n-c", spar_s.n_c, "Community target (0 = off)");
  spar->add_option("--small-fraction", spar_s.small_fraction, "Small-community threshold");
  spar->add_option("--prune", spar_prune, "Edge pruning: random or degree_keep");
  spar->add_option("--seed", spar_seed, "Seed for edge pruning");
  spar->add_flag("--keep-labels", spar_keep_labels, "Keep original labels in the working graph");

  // render
  auto* rend = app.add_subcommand("render", "Render a solution image");
  std::string rend_net, rend_solution, rend_phase = "mutation", rend_layout = "kk", rend_out = "solution.png";
  std::uint64_t rend_seed = 0;
  rend->add_option("--network", rend_net, "Edge list (must be connected)")->required()->check(CLI::ExistingFile);
  rend->add_option("--solution", rend_solution, "Comma separated node labels");
  rend->add_option("--phase", rend_phase, "init, crossover or mutation");
  rend->add_option("--layout", rend_layout, "kk or fr");
  rend->add_option("--seed", rend_seed, "Layout seed (fr only)");
  rend->add_option("--out", rend_out, "PNG path");

  // run
  auto* run = app.add_subcommand("run", "Run an experiment");
  std::string run_config, run_backend, run_out, run_objective;
  std::vector<std::string> run_arms, run_networks, run_sets;
  std::uint64_t run_seed_opt = 0;
  std::size_t run_jobs = 0, run_runs = 0;
  run->add_option("--config", run_config, "JSON configuration")->check(CLI::ExistingFile);
  run->add_option("--seed", run_seed_opt, "Base seed");
  run->add_option("--backend", run_backend, "mock or live")->check(CLI::IsMember({"mock", "live"}));
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--arm", run_arms, "Arm `name[:key=value,...]`, repeatable");
  run->add_option("--network", run_networks, "Edge list, repeatable")->check(CLI::ExistingFile);
  run->add_option("--objective", run_objective, "edv, ic_spread or dismantling");
  run->add_option("--jobs", run_jobs, "Concurrent repetitions");
  run->add_option("--runs", run_runs, "Repetitions per arm");
  run->add_option("--set", run_sets, "Extra `key=value` setting, repeatable");
  bool run_quiet = false;
  run->add_flag("--quiet", run_quiet, "No progress lines");

  // stats
  auto* stats = app.add_subcommand("stats", "Rank-sum test of two samples, or one-way ANOVA");
  std::string stats_x, stats_y;
  std::vector<std::string> stats_groups;
  double stats_alpha = 0.05;
  stats->add_option("--x", stats_x, "First sample, comma separated");
  stats->add_option("--y", stats_y, "Second sample, comma separated");
  stats->add_option("--group", stats_groups, "ANOVA group, repeatable");
  stats->add_option("--alpha", stats_alpha, "Significance level");

  // report
  auto* rep = app.add_subcommand("report", "Rebuild reports from the runs of an output directory");
  std::string rep_out = "veo_out";
  rep->add_option("--out", rep_out, "Output directory of an earlier run")->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (comm->parsed()) {
      const auto g = veo::load_edge_list(comm_net).graph;
      const auto cs = communities_for(g, comm_frac, comm_target);
      if (comm_out.empty()) {
        veo::write_communities(g, cs, std::cout);
      } else {
        std::ofstream out(comm_out);
        if (!out) throw veo::Error("cannot write '" + comm_out + "'");
        veo::write_communities(g, cs, out);
      }
      std::cerr << cs.size() << " communities, modularity " << veo::format_number(veo::modularity(g, cs)) << '\n';
    } else if (spar->parsed()) {
      const auto g = veo::load_edge_list(spar_net).graph;
      const auto cs = communities_for(g, spar_s.small_fraction, spar_s.n_c);
      const auto w = veo::sparsify_if_large(
          g, cs, {spar_s.n_v, spar_s.n_e, veo::parse_prune_policy(spar_prune), spar_seed, !spar_keep_labels});
      const auto stem = std::filesystem::path(spar_out) / std::filesystem::path(spar_net).stem();
      std::filesystem::create_directories(spar_out);
      veo::write_sparsified(g, w, stem);
      std::cout << stem.string() << ".edges: " << w.graph.node_count() << " nodes, " << w.graph.edge_count()
                << " edges" << (w.reduced ? "" : " (unchanged)") << '\n';
    } else if (rend->parsed()) {
      const auto g = veo::load_edge_list(rend_net).graph;
      const auto labels = split_labels(rend_solution);
      const auto solution = veo::SeedSet::from_labels(g, labels);
      const auto layout = veo::compute_layout(g, veo::parse_layout_style(rend_layout), rend_seed);
      const auto img = veo::render_solution_image(g, layout, veo::RenderSpec{}, solution, veo::parse_phase(rend_phase));
      veo::write_png(img, rend_out);
      std::cout << rend_out << '\n';
    } else if (run->parsed()) {
      veo::ExperimentConfig cfg = run_config.empty() ? veo::ExperimentConfig{} : veo::load_experiment_config(run_config);
      if (!run_networks.empty()) cfg.networks.assign(run_networks.begin(), run_networks.end());
      if (run->count("--seed")) cfg.seed = run_seed_opt;
      if (!run_backend.empty()) cfg.backend = run_backend;
      if (!run_out.empty()) cfg.out = run_out;
      if (!run_objective.empty()) cfg.set("engine.objective", run_objective);
      if (run_jobs > 0) cfg.jobs = run_jobs;
      if (run_runs > 0) cfg.runs = run_runs;
      for (const auto& kv : run_sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw veo::ConfigError("--set needs key=value: '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (!run_arms.empty()) {
        cfg.arms.clear();
        for (const auto& a : run_arms) cfg.arms.push_back(veo::parse_arm(a));
      }
      const auto outcome = veo::run_experiment(cfg, run_quiet ? nullptr : &std::cerr);
      for (const auto& ns : outcome.summary.networks) {
        for (const auto& as : ns.arms) {
          std::cout << ns.network << '\t' << as.arm << '\t' << veo::format_number(as.mean) << " +- "
                    << veo::format_number(as.sd) << " (" << as.runs << " runs)\n";
        }
      }
      std::cout << "reports in " << (cfg.out / "reports").string() << '\n';
    } else if (stats->parsed()) {
      if (!stats_groups.empty()) {
        std::vector<std::vector<double>> groups;
        for (const auto& g : stats_groups) groups.push_back(parse_numbers(g));
        const auto r = veo::anova_oneway(groups, stats_alpha);
        std::cout << "F " << veo::format_number(r.f) << "\np " << veo::format_number(r.p) << "\ndifferent "
                  << (r.different ? "true" : "false") << '\n';
      } else {
        if (stats_x.empty() || stats_y.empty()) throw veo::ConfigError("stats needs --x and --y, or --group");
        const auto x = parse_numbers(stats_x);
        const auto y = parse_numbers(stats_y);
        const auto r = veo::wilcoxon_rank_sum(x, y, stats_alpha);
        std::cout << "U " << veo::format_number(r.statistic) << "\np " << veo::format_number(r.p) << "\nmethod "
                  << (r.exact ? "exact" : "normal") << "\ndecision " << veo::symbol(r.decision) << '\n';
      }
    } else if (rep->parsed()) {
      const auto outcome = veo::load_outcome(rep_out);
      std::ifstream in(std::filesystem::path(rep_out) / "config.json");
      std::stringstream buf;
      buf << in.rdbuf();
      veo::emit_reports(rep_out, veo::parse_experiment_config(buf.str()), outcome);
      std::cout << "reports in " << (std::filesystem::path(rep_out) / "reports").string() << '\n';
    }
  } catch (const veo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
