#pragma once

#include <optional>
#include <string>
#include <vector>

#include "guillopack/compartments.hpp"
#include "guillopack/core.hpp"
#include "guillopack/guillotine.hpp"

namespace guillopack {

struct RenderStyle {
  double cell = 8.0;  // pixels per unit
  double margin = 8.0;
  std::vector<std::string> palette{"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                   "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
  bool items = true;
  bool cuts = true;
  bool compartments = true;
  bool stages = true;  // cut colour and dash by stage, else one style
  bool labels = true;
};

/// One drawn cut: the segment it occupies inside its piece.
struct CutSegment {
  Orientation orientation;
  Coord position;
  Coord from;  // along the cut
  Coord to;
  int stage;  // 1-based orientation run along the root path
};

/// Geometry to be drawn, in knapsack coordinates (y up).
struct SvgModel {
  Coord n = 1;
  std::vector<PlacedItem> items;
  std::vector<CutSegment> cuts;
  std::vector<std::vector<std::pair<Coord, Coord>>> outlines;  // compartment polygons
};

/// Throws std::logic_error if a cut segment crosses an item interior.
SvgModel build_svg_model(const Packing& p, const GuillotineTree* tree = nullptr,
                         const PseudoGuillotineTree* compartments = nullptr);

std::string render_svg(const SvgModel& m, const RenderStyle& style = {});
std::string render_svg(const Packing& p, const GuillotineTree* tree = nullptr,
                       const PseudoGuillotineTree* compartments = nullptr, const RenderStyle& style = {});

}  // namespace guillopack
