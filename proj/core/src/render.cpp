#include "veo/render.hpp"

#include <cmath>

#include "veo/error.hpp"

namespace veo {

Phase parse_phase(const std::string& name) {
  if (name == "init") return Phase::init;
  if (name == "crossover") return Phase::crossover;
  if (name == "mutation") return Phase::mutation;
  throw ConfigError("unknown phase '" + name + "' (expected init, crossover or mutation)");
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::init: return "init";
    case Phase::crossover: return "crossover";
    case Phase::mutation: return "mutation";
  }
  return "init";
}

namespace {

int px(double v) { return static_cast<int>(std::lround(v)); }

bool is_labelled(LabelMode mode, Phase phase, bool in_solution) {
  switch (mode) {
    case LabelMode::all_nodes: return true;
    case LabelMode::solution_only: return in_solution;
    case LabelMode::by_phase: return phase != Phase::crossover || in_solution;
  }
  return true;
}

}  // namespace

Image render_solution_image(const Graph& g, const Layout& layout, const RenderSpec& spec, const SeedSet& solution,
                            Phase phase, std::span<const std::string> display_labels) {
  if (spec.node_radius <= 0 || spec.label_scale <= 0) throw ConfigError("node radius and label scale must be positive");
  if (layout.positions.size() != g.node_count()) throw GraphError("layout does not cover the graph");
  if (!display_labels.empty() && display_labels.size() != g.node_count()) {
    throw GraphError("display labels do not cover the graph");
  }
  solution.check_against(g);
  Image img(spec.width, spec.height, spec.background);
  const auto& pos = layout.positions;
  for (const auto& [u, v] : g.edges()) {
    draw_line(img, pos[u].x, pos[u].y, pos[v].x, pos[v].y, spec.edge_thickness, spec.edge_color);
  }
  auto fill_of = [&](NodeIndex v) {
    return phase == Phase::mutation && !solution.contains(v) ? spec.nonsolution_color : spec.solution_color;
  };
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const int cx = px(pos[v].x);
    const int cy = px(pos[v].y);
    const Rgb fill = fill_of(v);
    fill_disk(img, cx, cy, spec.node_radius, fill);
    if (fill == spec.nonsolution_color) draw_ring(img, cx, cy, spec.node_radius, spec.outline_width, spec.outline_color);
  }
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (!is_labelled(spec.label_mode, phase, solution.contains(v))) continue;
    const Rgb fill = fill_of(v);
    const Rgb ink = fill == spec.nonsolution_color ? Rgb{0, 0, 0} : Rgb{0xFF, 0xFF, 0xFF};
    const std::string& text = display_labels.empty() ? g.label(v) : display_labels[v];
    draw_text_centered(img, text, px(pos[v].x), px(pos[v].y), spec.label_scale, ink);
  }
  return img;
}

std::pair<int, int> probe_point(const Layout& layout, const RenderSpec& spec, NodeIndex v) {
  // Just below the glyph box, still inside the disk and the outline.
  const int below_text = text_height(spec.label_scale) / 2 + 2;
  const int inside = spec.node_radius - spec.outline_width - 1;
  return {px(layout.positions[v].x), px(layout.positions[v].y) + std::min(below_text, inside)};
}

}  // namespace veo
