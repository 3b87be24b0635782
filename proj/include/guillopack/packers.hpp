#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "guillopack/classify.hpp"
#include "guillopack/compartments.hpp"
#include "guillopack/core.hpp"
#include "guillopack/guillotine.hpp"
#include "guillopack/rational.hpp"

namespace guillopack {

enum class Objective { Cardinality, Profit };
/// Which side of an item a stack consumes.
enum class Dimension { Height, Width };

Coord side_of(const Item& it, Dimension d);

struct NfdhResult {
  std::vector<PlacedItem> placed;
  std::vector<Item> unplaced;
  GuillotineTree tree;
};

/// Next-fit decreasing height shelves in `box`. Heights descending, ties by
/// id. Stops at the first item that opens a shelf above the box.
NfdhResult nfdh_pack(std::span<const Item> items, const Rect& box);

struct StackChoice {
  std::vector<int> ids;  // sorted
  Coord used = 0;
  Profit profit = 0;
};

/// Items stacked along `d` within `capacity`. Cardinality is the greedy
/// shortest-first choice; profit is a 0/1 knapsack DP.
StackChoice stack_knapsack(std::span<const Item> items, Coord capacity, Objective obj,
                           Dimension d = Dimension::Height);

struct LargeMatch {
  std::vector<std::pair<int, int>> pairs;  // (item id, box index)
  std::vector<PlacedItem> placed;          // items at the bottom-left corner of their box
};

/// Maximum-cardinality matching of items to boxes; an edge exists iff the
/// item fits the box.
LargeMatch match_large(std::span<const Item> items, std::span<const Rect> boxes);

struct GapItem {
  int id = 0;
  std::vector<Coord> sizes;     // per bin; anything above the capacity means "never"
  std::vector<Profit> profits;  // per bin
};

struct GapInstance {
  std::vector<Coord> capacities;
  std::vector<GapItem> items;

  Coord infinity(std::size_t bin) const { return capacities.at(bin) + 1; }
  bool fits(std::size_t item, std::size_t bin) const {
    return items[item].sizes[bin] <= capacities[bin];
  }
  void validate() const;
};

enum class GapMode { Exact, GreedyEps };

struct GapResult {
  std::vector<int> bin_of;  // per item, -1 when unassigned
  Profit profit = 0;
};

/// Exact mode: DP over residual capacities, at most 8 bins, throws
/// BudgetExceeded past `budget` states. Greedy mode is a heuristic: the
/// best of density greedy with single-item patching and successive per-bin
/// knapsacks over several bin orders, each followed by swap repair.
GapResult gap_solve(const GapInstance& g, GapMode mode, std::int64_t budget = 4'000'000);

/// True iff both sides are at most eps times the box sides.
bool eps_small_for(const Item& it, const Rect& box, const Rational& eps);

struct SmallAssignment {
  std::vector<std::vector<PlacedItem>> per_box;
  std::vector<GuillotineTree> trees;
  GapResult gap;
};

/// Assigns small items to small-area boxes through GAP (capacity = area),
/// keeps the densest items of each box up to (1-2eps-eps^2) of its area
/// (plus the item that crosses it), and packs them by NFDH.
SmallAssignment assign_small(std::span<const Rect> boxes, std::span<const Item> items, const Rational& eps,
                             Objective obj, GapMode mode = GapMode::Exact, std::int64_t budget = 4'000'000);

struct SizeGroup {
  int level = 0;
  Rational lower;   // (1+eps)^level
  Rational upper;   // (1+eps)^(level+1), exclusive
  Coord rounded = 0;   // largest integer below `upper`
  Coord max_size = 0;  // largest member side; what placement rounds to
  std::vector<Item> items;
};

/// Groups items by the side `d` into [(1+eps)^l, (1+eps)^(l+1)), l = 0..floor(log_{1+eps} N).
std::vector<SizeGroup> group_by_size(std::span<const Item> items, Dimension d, const Rational& eps, Coord n);

struct HeightGroups {
  std::vector<SizeGroup> horizontal;  // by height
  std::vector<SizeGroup> vertical;    // by width
};

/// Horizontal items grouped by height, vertical items by width. Non-skewed
/// items raise InputError.
HeightGroups build_height_groups(std::span<const Item> items, const Rational& eps, Coord n,
                                 const ClassThresholds& t);

struct LinearGroups {
  std::vector<std::vector<Item>> blocks;  // originals, sorted by the grouped side, descending
  std::vector<Coord> rounded;             // block maximum; blocks[0] is dropped
  std::vector<Item> dropped;
  std::size_t block_size = 0;
};

/// Linear grouping of one size group along `d` (width for horizontal items)
/// into 1/eps + 1 blocks. 1/eps must be an integer.
LinearGroups linear_group(std::span<const Item> group, const Rational& eps, Dimension d);

/// Identical rounded items: place `count` of them, substituting the first
/// `count` entries of `originals` (each dominated by `shape`).
struct RoundedRequest {
  Item shape;
  std::vector<Item> originals;
  int count = 0;
  bool horizontal = true;
};

/// Nice placement of the requested rounded items in a box (one orientation
/// only) or an L-compartment, then the originals are put into the slots.
/// Throws InputError when the counts exceed the compartment.
std::vector<PlacedItem> place_rounded_in_compartment(const Compartment& c, std::span<const RoundedRequest> requests);

}  // namespace guillopack
