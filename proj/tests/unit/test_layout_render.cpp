#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "support/generators.hpp"
#include "veo/error.hpp"
#include "veo/hashing.hpp"
#include "veo/layout.hpp"
#include "veo/raster.hpp"
#include "veo/render.hpp"

using namespace veo;
using testgen::make_graph;

namespace {

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Graph single_node() {
  GraphBuilder b;
  b.add_node("0");
  return b.build();
}

void expect_inside(const Layout& l, double margin) {
  for (const auto& p : l.positions) {
    EXPECT_GE(p.x, margin - 1e-9);
    EXPECT_LE(p.x, l.width - margin + 1e-9);
    EXPECT_GE(p.y, margin - 1e-9);
    EXPECT_LE(p.y, l.height - margin + 1e-9);
  }
}

}  // namespace

TEST(KamadaKawai, SingleNodeAtCenter) {
  const auto l = layout_kamada_kawai(single_node());
  ASSERT_EQ(l.positions.size(), 1u);
  EXPECT_DOUBLE_EQ(l.positions[0].x, 600.0);
  EXPECT_DOUBLE_EQ(l.positions[0].y, 600.0);
}

TEST(KamadaKawai, K2IsHorizontalAndCentered) {
  const auto l = layout_kamada_kawai(make_graph(2, {{0, 1}}));
  EXPECT_NEAR(l.positions[0].y, l.positions[1].y, 1e-9);
  EXPECT_NEAR(dist(l.positions[0], {600, 600}), dist(l.positions[1], {600, 600}), 1e-9);
}

TEST(KamadaKawai, FourCycleIsSymmetricAndStressDrops) {
  const auto c4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  const auto r = kk_optimize(c4);
  EXPECT_LE(r.final_stress, r.initial_stress);
  EXPECT_NEAR(r.initial_stress, kk_stress(c4, kk_initial_positions(c4)), 1e-12);
  const auto l = layout_kamada_kawai(c4);
  std::vector<double> sides{dist(l.positions[0], l.positions[1]), dist(l.positions[1], l.positions[2]),
                            dist(l.positions[2], l.positions[3]), dist(l.positions[3], l.positions[0])};
  const auto [lo, hi] = std::minmax_element(sides.begin(), sides.end());
  EXPECT_LE(*hi / *lo, 1.05);
}

TEST(KamadaKawai, StressNeverIncreasesAndFitsCanvas) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const auto g = testgen::connected_random(25, 0.08, rng);
    const auto r = kk_optimize(g);
    EXPECT_LE(r.final_stress, r.initial_stress);
    EXPECT_LE(r.iterations, 1000);
    const auto l = layout_kamada_kawai(g);
    expect_inside(l, 0.08 * 1200);
    EXPECT_EQ(l, layout_kamada_kawai(g));
  }
}

TEST(KamadaKawai, DisconnectedIsAnError) {
  EXPECT_THROW(layout_kamada_kawai(make_graph(4, {{0, 1}, {2, 3}})), GraphError);
}

TEST(FruchtermanReingold, SingleNodeAndDeterminism) {
  const auto one = layout_fruchterman_reingold(single_node(), 4);
  EXPECT_DOUBLE_EQ(one.positions[0].x, 600.0);
  std::mt19937_64 rng(4);
  const auto g = testgen::connected_random(30, 0.1, rng);
  EXPECT_EQ(layout_fruchterman_reingold(g, 9), layout_fruchterman_reingold(g, 9));
  expect_inside(layout_fruchterman_reingold(g, 9), 0.08 * 1200);
}

TEST(FruchtermanReingold, K2DoesNotOverlap) {
  const auto l = layout_fruchterman_reingold(make_graph(2, {{0, 1}}), 1);
  EXPECT_GE(dist(l.positions[0], l.positions[1]), 2.0 * RenderSpec{}.node_radius);
}

TEST(Layout, StyleNames) {
  EXPECT_EQ(parse_layout_style("KK"), LayoutStyle::kamada_kawai);
  EXPECT_EQ(parse_layout_style("fruchterman_reingold"), LayoutStyle::fruchterman_reingold);
  EXPECT_EQ(to_string(LayoutStyle::fruchterman_reingold), "fr");
  EXPECT_THROW(parse_layout_style("spring"), ConfigError);
}

TEST(Layout, CacheReusesSidecar) {
  std::mt19937_64 rng(5);
  const auto g = testgen::connected_random(15, 0.2, rng);
  const auto dir = std::filesystem::temp_directory_path() / "veo_layout_cache_test";
  std::filesystem::remove_all(dir);
  const auto first = cached_layout(g, LayoutStyle::fruchterman_reingold, 3, dir);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
  const auto second = cached_layout(g, LayoutStyle::fruchterman_reingold, 3, dir);
  for (std::size_t i = 0; i < first.positions.size(); ++i) {
    EXPECT_NEAR(first.positions[i].x, second.positions[i].x, 1e-9);
    EXPECT_NEAR(first.positions[i].y, second.positions[i].y, 1e-9);
  }
  std::filesystem::remove_all(dir);
}

TEST(Render, DimensionsAndProbeColorsInMutationPhase) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 5; ++i) {
    const auto g = testgen::connected_random(40, 0.06, rng);
    const auto layout = layout_kamada_kawai(g);
    const RenderSpec spec;
    const SeedSet s({1, 5, 9, 22});
    const auto img = render_solution_image(g, layout, spec, s, Phase::mutation);
    EXPECT_EQ(img.width(), 1200);
    EXPECT_EQ(img.height(), 1200);
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
      const auto [x, y] = probe_point(layout, spec, v);
      const auto want = s.contains(v) ? Rgb{0x2F, 0x7F, 0xC1} : Rgb{0xFF, 0xFF, 0xFF};
      EXPECT_EQ(img.at(x, y), want) << "node " << v;
    }
  }
}

TEST(Render, ByteIdenticalPngs) {
  std::mt19937_64 rng(7);
  const auto g = testgen::connected_random(20, 0.1, rng);
  const auto layout = layout_kamada_kawai(g);
  for (auto phase : {Phase::init, Phase::crossover, Phase::mutation}) {
    const auto a = encode_png(render_solution_image(g, layout, {}, SeedSet({0, 3}), phase));
    const auto b = encode_png(render_solution_image(g, layout, {}, SeedSet({0, 3}), phase));
    EXPECT_EQ(sha256_hex(a), sha256_hex(b));
  }
}

TEST(Render, EmptyGraphInitIsBlank) {
  const auto img = render_solution_image(Graph{}, Layout{}, {}, SeedSet(), Phase::init);
  EXPECT_EQ(img, Image(1200, 1200, {255, 255, 255}));
}

TEST(Render, PhasesColorNodesAsSpecified) {
  const auto g = make_graph(3, {{0, 1}, {1, 2}});
  const auto layout = layout_kamada_kawai(g);
  const RenderSpec spec;
  const Rgb blue{0x2F, 0x7F, 0xC1};
  for (auto phase : {Phase::init, Phase::crossover}) {
    const auto img = render_solution_image(g, layout, spec, SeedSet({0}), phase);
    for (NodeIndex v = 0; v < 3; ++v) {
      const auto [x, y] = probe_point(layout, spec, v);
      EXPECT_EQ(img.at(x, y), blue);
    }
  }
}

TEST(Render, LabelsAppearOnlyWhereExpected) {
  const auto g = make_graph(3, {{0, 1}, {1, 2}});
  const auto layout = layout_kamada_kawai(g);
  const RenderSpec spec;
  const Rgb white{255, 255, 255};
  auto has_white_text = [&](const Image& img, NodeIndex v) {
    const int cx = static_cast<int>(std::lround(layout.positions[v].x));
    const int cy = static_cast<int>(std::lround(layout.positions[v].y));
    for (int dy = -9; dy <= 9; ++dy) {
      for (int dx = -9; dx <= 9; ++dx) {
        if (img.at(cx + dx, cy + dy) == white) return true;
      }
    }
    return false;
  };
  const auto crossover = render_solution_image(g, layout, spec, SeedSet({0}), Phase::crossover);
  EXPECT_TRUE(has_white_text(crossover, 0));
  EXPECT_FALSE(has_white_text(crossover, 1));
  const auto init = render_solution_image(g, layout, spec, SeedSet(), Phase::init);
  for (NodeIndex v = 0; v < 3; ++v) EXPECT_TRUE(has_white_text(init, v));
}

TEST(Render, UnknownSolutionNodeIsAnError) {
  const auto g = make_graph(2, {{0, 1}});
  EXPECT_THROW(render_solution_image(g, layout_kamada_kawai(g), {}, SeedSet({5}), Phase::mutation), GraphError);
}

TEST(Raster, PngRoundTrip) {
  Image img(31, 17, {10, 20, 30});
  fill_disk(img, 15, 8, 6, {200, 0, 100});
  draw_text(img, "42", 1, 1, 1, {0, 0, 0});
  const auto bytes = encode_png(img);
  EXPECT_EQ(decode_png(bytes), img);
  EXPECT_THROW(decode_png(std::vector<std::uint8_t>{1, 2, 3}), ParseError);
  auto truncated = bytes;
  truncated.resize(bytes.size() / 2);
  EXPECT_THROW(decode_png(truncated), ParseError);
}

TEST(Raster, HexColors) {
  EXPECT_EQ(parse_hex_color("#2F7FC1"), (Rgb{0x2F, 0x7F, 0xC1}));
  EXPECT_EQ(to_hex({0x2F, 0x7F, 0xC1}), "#2F7FC1");
  EXPECT_THROW(parse_hex_color("2F7FC1"), ConfigError);
  EXPECT_THROW(parse_hex_color("#2G7FC1"), ConfigError);
}

TEST(Raster, TextMetrics) {
  EXPECT_EQ(text_width("12", 3), 33);
  EXPECT_EQ(text_height(3), 21);
  EXPECT_EQ(text_width("", 3), 0);
}
