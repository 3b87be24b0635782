#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guillopack/core.hpp"
#include "guillopack/guillotine.hpp"

namespace guillopack {

/// An L inside `box`: a vertical arm of width `arm_v` along the left edge and
/// a horizontal arm of height `arm_h` along the bottom edge.
struct LShape {
  Rect box;
  Coord arm_v = 0;
  Coord arm_h = 0;

  bool contains(const Rect& r) const;
};

/// Boundary L of the knapsack: ([0,N] x [0,h_wide]) U ([0,w_tall] x [0,N]).
struct LRegion {
  Coord n = 1;
  Coord h_wide = 0;
  Coord w_tall = 0;

  LShape shape() const { return {Rect{0, 0, n, n}, w_tall, h_wide}; }
};

/// Horizontal items stacked bottom-up by non-increasing width, flush right;
/// vertical items left to right by non-increasing height, flush top.
/// Returns nothing if a stack overflows its arm or the two stacks collide.
std::optional<std::vector<PlacedItem>> place_in_lshape(std::span<const Item> horizontals,
                                                       std::span<const Item> verticals,
                                                       const LShape& shape);

struct LPlacementCanonical {
  bool feasible = false;
  std::vector<int> wide_order;
  std::vector<int> tall_order;
  std::vector<PlacedItem> items;  // empty when infeasible
};

/// Splits `items` into wide (w > N/2) and tall (h > N/2) and places them
/// canonically in the N x N knapsack. Non-long items and items that are both
/// wide and tall raise InputError.
LPlacementCanonical canonical_l_place(std::span<const Item> items, Coord n);

struct LBuild {
  Packing packing;
  LRegion region;
  GuillotineTree tree;
};

/// Repacks a guillotine packing of long items into the boundary L whose arms
/// are the total wide height and total tall width.
LBuild build_l_from_guillotine(const Packing& p, const GuillotineTree& t);

struct LSolution {
  std::vector<int> chosen;  // sorted ids
  std::vector<PlacedItem> placement;
  Profit value = 0;
};

/// Maximum number of items that admit a canonical placement in `shape`.
LSolution solve_l_cardinality(std::span<const Item> horizontals, std::span<const Item> verticals,
                              const LShape& shape);
LSolution solve_l_cardinality(std::span<const Item> items, const LRegion& region);

/// Exact maximum profit by subset enumeration; refuses more than 16 items.
LSolution solve_l_profit_smalln(std::span<const Item> items, const LRegion& region);
LSolution solve_l_profit_smalln(std::span<const Item> horizontals, std::span<const Item> verticals,
                                const LShape& shape);

}  // namespace guillopack
