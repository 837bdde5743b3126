#pragma once

#include <span>
#include <string>
#include <vector>

#include "veo/fitness.hpp"
#include "veo/graph.hpp"
#include "veo/layout.hpp"
#include "veo/raster.hpp"

namespace veo {

enum class Phase { init, crossover, mutation };
Phase parse_phase(const std::string& name);
std::string to_string(Phase phase);

enum class LabelMode { by_phase, all_nodes, solution_only };

struct RenderSpec {
  int width = 1200;
  int height = 1200;
  int node_radius = 17;
  /// 5x7 glyph scale; 3 gives 21 px tall digits.
  int label_scale = 3;
  Rgb solution_color{0x2F, 0x7F, 0xC1};
  Rgb nonsolution_color{0xFF, 0xFF, 0xFF};
  Rgb background{0xFF, 0xFF, 0xFF};
  Rgb edge_color{0xBE, 0xBE, 0xBE};
  Rgb outline_color{0x33, 0x33, 0x33};
  int outline_width = 2;
  int edge_thickness = 2;
  LabelMode label_mode = LabelMode::by_phase;
};

/// Draws edges, then node disks, then labels.
///
/// init: every node solution-colored and labelled. crossover: every node
/// solution-colored, only solution nodes labelled. mutation: solution nodes
/// solution-colored, the rest outlined in nonsolution color, all labelled.
/// `display_labels`, when non-empty, replaces the graph labels in the image.
/// Throws GraphError when a solution node lies outside `g` or the layout
/// does not cover `g`.
Image render_solution_image(const Graph& g, const Layout& layout, const RenderSpec& spec, const SeedSet& solution,
                            Phase phase, std::span<const std::string> display_labels = {});

/// A point inside node `v`'s disk that the label glyphs never cover.
std::pair<int, int> probe_point(const Layout& layout, const RenderSpec& spec, NodeIndex v);

}  // namespace veo
