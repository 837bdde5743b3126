#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "veo/graph.hpp"

namespace veo {

enum class LayoutStyle { kamada_kawai, fruchterman_reingold };

/// Accepts "kk", "KK", "kamada_kawai", "fr", "FR", "fruchterman_reingold".
LayoutStyle parse_layout_style(const std::string& name);
std::string to_string(LayoutStyle style);

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Node positions in canvas pixels, indexed by NodeIndex.
struct Layout {
  std::vector<Point> positions;
  LayoutStyle style = LayoutStyle::kamada_kawai;
  int width = 1200;
  int height = 1200;
  friend bool operator==(const Layout&, const Layout&) = default;
};

struct CanvasFit {
  int width = 1200;
  int height = 1200;
  double margin_fraction = 0.08;
};

/// Kamada-Kawai stress of raw positions: sum over pairs of
/// (|xi - xj| - dij)^2 / dij^2 with dij the hop distance.
double kk_stress(const Graph& g, const std::vector<Point>& positions);

/// Circle of radius max_distance / 2, node i at angle 2*pi*i/n.
std::vector<Point> kk_initial_positions(const Graph& g);

struct KkResult {
  std::vector<Point> raw;
  double initial_stress = 0.0;
  double final_stress = 0.0;
  int iterations = 0;
};

/// Monotone gradient descent on the stress. Throws GraphError when `g` is
/// disconnected.
KkResult kk_optimize(const Graph& g, int max_iterations = 1000, double tolerance = 1e-6);

/// Uniform scale and translation so the bounding box is centered inside the
/// canvas minus the margin. A zero extent maps to the center.
std::vector<Point> fit_to_canvas(const std::vector<Point>& raw, const CanvasFit& fit);

Layout layout_kamada_kawai(const Graph& g, const CanvasFit& fit = {});
Layout layout_fruchterman_reingold(const Graph& g, std::uint64_t rng_seed, const CanvasFit& fit = {},
                                   int iterations = 300);
Layout compute_layout(const Graph& g, LayoutStyle style, std::uint64_t rng_seed, const CanvasFit& fit = {});

/// Loads the layout from `dir` when a sidecar for (graph hash, style, seed)
/// exists, otherwise computes and stores it.
Layout cached_layout(const Graph& g, LayoutStyle style, std::uint64_t rng_seed, const std::filesystem::path& dir,
                     const CanvasFit& fit = {});

}  // namespace veo
