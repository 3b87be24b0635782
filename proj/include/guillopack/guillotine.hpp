#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "guillopack/core.hpp"

namespace guillopack {

/// A horizontal cut is the line y = position; a vertical cut is x = position.
enum class Orientation { Horizontal, Vertical };

inline Orientation other(Orientation o) {
  return o == Orientation::Horizontal ? Orientation::Vertical : Orientation::Horizontal;
}

struct GuillotineNode {
  Rect region;
  std::optional<Orientation> cut;
  Coord position = 0;
  int low = -1;   // below (horizontal cut) or left (vertical cut)
  int high = -1;  // above or right
  std::optional<int> item_id;  // leaves only

  bool is_leaf() const { return !cut.has_value(); }
};

/// Binary cut tree stored as an arena; node 0 is the root.
class GuillotineTree {
 public:
  GuillotineTree() : GuillotineTree(Rect{0, 0, 1, 1}) {}
  explicit GuillotineTree(Rect root_region);

  int root() const { return 0; }
  const GuillotineNode& node(int index) const { return nodes_.at(static_cast<std::size_t>(index)); }
  const std::vector<GuillotineNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  /// Turns a leaf into a cut node. Returns {low, high}.
  std::pair<int, int> split(int leaf, Orientation o, Coord position);
  void assign_item(int leaf, int item_id);
  /// Replaces leaf `leaf` with a copy of `sub`, whose root region must match.
  /// Returns the new index of every node of `sub`.
  std::vector<int> graft(int leaf, const GuillotineTree& sub);

  std::vector<int> leaves() const;
  int cut_count() const;

 private:
  std::vector<GuillotineNode> nodes_;
};

/// Copy of the subtree rooted at `node`.
GuillotineTree subtree(const GuillotineTree& t, int node);
GuillotineTree translated(const GuillotineTree& t, Coord dx, Coord dy);

struct NotSeparable {
  Rect piece;
  std::vector<int> item_ids;
};

using SeparabilityResult = std::variant<GuillotineTree, NotSeparable>;

/// Recursive end-to-end cut search restricted to item-edge coordinates.
/// Among cuts that separate at least two items, the smallest coordinate is
/// taken, horizontal cuts before vertical ones.
SeparabilityResult check_guillotine(std::span<const PlacedItem> items, Rect region);
SeparabilityResult check_guillotine(const Packing& p);

inline bool is_separable(const SeparabilityResult& r) {
  return std::holds_alternative<GuillotineTree>(r);
}

/// Replays a tree against the items it claims to separate. Empty result
/// means every invariant holds: children partition their parent, cuts lie
/// strictly inside their region and avoid item interiors, each item sits in
/// exactly one leaf.
std::vector<std::string> verify_tree(const GuillotineTree& tree, std::span<const PlacedItem> items);

struct LeafStage {
  int item_id;
  int depth;
};

struct StageProfile {
  /// Orientation runs along the worst root-to-leaf path, trim cuts excluded.
  int stages = 0;
  /// Same count with trim cuts treated like any other cut.
  int raw_runs = 0;
  std::vector<LeafStage> leaves;
};

/// A trim cut is a cut with one item-free side; it never opens a new stage.
StageProfile stage_count(const GuillotineTree& tree);

/// Reflects every item inside `within`. Axis::Y reflects x-coordinates
/// (mirror across a vertical line), Axis::X reflects y-coordinates.
std::vector<PlacedItem> mirror(std::span<const PlacedItem> items, Axis axis, Rect within);
Packing mirror(const Packing& p, Axis axis, Rect within);
GuillotineTree mirror(const GuillotineTree& tree, Axis axis, Rect within);

struct StageBoundedResult {
  Packing packing;
  GuillotineTree tree;
  Profit value = 0;
  bool complete = true;
  std::int64_t expansions = 0;
};

/// Exhaustive search over all guillotine packings with at most `max_stages`
/// orientation runs. Cut positions are restricted to subset sums of item
/// sides. When `budget` state expansions are exceeded the best packing found
/// so far is returned with complete = false.
StageBoundedResult stage_bounded_best(const std::shared_ptr<const Instance>& inst, int max_stages,
                                      std::int64_t budget);

}  // namespace guillopack
