#include <benchmark/benchmark.h>

#include <random>

#include "support/generators.hpp"
#include "veo/community.hpp"
#include "veo/fitness.hpp"
#include "veo/graph.hpp"
#include "veo/layout.hpp"
#include "veo/raster.hpp"
#include "veo/render.hpp"

namespace {

veo::Graph ba(std::size_t n) {
  std::mt19937_64 rng(n);
  return veo::testgen::barabasi_albert(n, 3, rng);
}

void BM_Betweenness(benchmark::State& state) {
  const auto g = ba(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(veo::betweenness(g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Betweenness)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_Edv(benchmark::State& state) {
  const auto g = ba(static_cast<std::size_t>(state.range(0)));
  std::vector<veo::NodeIndex> members;
  for (veo::NodeIndex v = 0; v < 10; ++v) members.push_back(v * 7);
  const veo::SeedSet seeds(members);
  for (auto _ : state) benchmark::DoNotOptimize(veo::edv(g, seeds, 0.05));
}
BENCHMARK(BM_Edv)->Arg(1000)->Arg(10000);

void BM_Fastgreedy(benchmark::State& state) {
  const auto g = ba(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(veo::detect_fastgreedy(g));
}
BENCHMARK(BM_Fastgreedy)->Arg(500)->Arg(2000);

void BM_KamadaKawai(benchmark::State& state) {
  const auto g = ba(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(veo::compute_layout(g, veo::LayoutStyle::kamada_kawai, 0));
}
BENCHMARK(BM_KamadaKawai)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_RenderAndEncode(benchmark::State& state) {
  const auto g = ba(50);
  const auto layout = veo::compute_layout(g, veo::LayoutStyle::kamada_kawai, 0);
  const veo::SeedSet seeds({1, 4, 9, 16, 25});
  for (auto _ : state) {
    auto img = veo::render_solution_image(g, layout, {}, seeds, veo::Phase::mutation);
    benchmark::DoNotOptimize(veo::encode_png(img));
  }
}
BENCHMARK(BM_RenderAndEncode)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
