#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "guillopack/classify.hpp"
#include "guillopack/core.hpp"
#include "guillopack/guillotine.hpp"
#include "guillopack/io.hpp"
#include "guillopack/lpack.hpp"
#include "guillopack/rational.hpp"

namespace guillopack {

enum class BoxKind { Any, Single, HorizontalStack, VerticalStack, SmallArea };

std::string to_string(BoxKind k);
BoxKind parse_box_kind(const std::string& s);

struct BoxCompartment {
  Rect rect;
  BoxKind kind = BoxKind::Any;
};

/// Where the two arms of an L meet.
enum class Corner { BottomLeft, BottomRight, TopLeft, TopRight };

std::string to_string(Corner c);
Corner parse_corner(const std::string& s);

/// L-shaped compartment inside `box`: a vertical arm of width `arm_v` and a
/// horizontal arm of height `arm_h`, both flush with `corner`. The canonical
/// frame is Corner::BottomLeft.
struct LCompartment {
  Rect box;
  Coord arm_v = 0;
  Coord arm_h = 0;
  Corner corner = Corner::BottomLeft;

  /// True when one arm is empty or fills the box, so the L is a rectangle.
  bool degenerate() const;
  bool contains(const Rect& r) const;
  /// The rectangle box \ L.
  Rect hole() const;
  /// Six vertices counter-clockwise, starting at the bend corner.
  std::vector<std::pair<Coord, Coord>> vertices() const;
  /// Arm thicknesses below eps_large * N / 2 (throws InputError otherwise),
  /// plus basic shape sanity.
  void validate(const std::optional<Rational>& eps_large = std::nullopt, Coord n = 0) const;
};

/// Builds an L from its six vertices (any rotation, either winding).
using Compartment = std::variant<BoxCompartment, LCompartment>;

LCompartment l_from_vertices(const std::vector<std::pair<Coord, Coord>>& vertices);

/// Mirrors needed to move `corner` to the bottom-left, applied in order.
std::vector<Axis> normalizing_mirrors(Corner corner);

struct NiceContext {
  Rational eps{1, 2};  // small-item fill ratio for SmallArea boxes
  std::optional<ClassThresholds> thresholds;
  Coord n = 0;
};

struct NiceCheck {
  bool ok = true;
  BoxKind matched = BoxKind::Any;
  std::string reason;
};

NiceCheck validate_nice_box(const BoxCompartment& b, std::span<const PlacedItem> items, const NiceContext& ctx);
NiceCheck validate_nice_l(const LCompartment& l, std::span<const PlacedItem> items, const NiceContext& ctx);

struct Cut {
  Rect piece;
  Orientation orientation;
  Coord position;
};

struct LCutSequence {
  std::vector<Cut> cuts;   // in emission order
  GuillotineTree tree;     // rooted at the L's box
  int hole_leaf = -1;      // empty leaf whose region is the hole
};

/// Guillotine cuts separating every item of a nice L placement; the hole
/// rectangle is left as an untouched leaf so that its contents can be grafted.
LCutSequence nice_l_cut_sequence(const LCompartment& l, std::span<const PlacedItem> items);

/// Pseudo-guillotine tree over compartments. A Peel node splits its
/// rectangle into an L leaf (low child) and the remaining rectangle (high).
struct PseudoNode {
  enum class Kind { Box, L, Cut, Peel };
  Kind kind = Kind::Box;
  Rect region;  // the rectangle S_v, or the L's bounding box
  BoxKind box_kind = BoxKind::Any;
  LCompartment l;
  Orientation orientation = Orientation::Horizontal;
  Coord position = 0;
  int low = -1;
  int high = -1;
};

class PseudoGuillotineTree {
 public:
  explicit PseudoGuillotineTree(Coord n);

  Coord side() const { return n_; }
  int root() const { return 0; }
  const PseudoNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  std::size_t size() const { return nodes_.size(); }

  std::pair<int, int> cut(int leaf, Orientation o, Coord position);
  /// Splits a box leaf into an L (arms at `corner`) and the rest. Returns {l_leaf, rest}.
  std::pair<int, int> peel(int leaf, Corner corner, Coord arm_v, Coord arm_h);
  void set_box_kind(int leaf, BoxKind kind);

  /// Leaf indices in pre-order.
  std::vector<int> leaves() const;
  /// Structural check of the definition; empty means fine.
  std::vector<std::string> problems(const std::optional<Rational>& eps_large = std::nullopt) const;

 private:
  Coord n_;
  std::vector<PseudoNode> nodes_;
};

/// The leaves of `t` in pre-order, as compartments.
std::vector<Compartment> compartments(const PseudoGuillotineTree& t);

Json pseudo_tree_to_json(const PseudoGuillotineTree& t);
PseudoGuillotineTree pseudo_tree_from_json(const Json& j);

/// Fillings as {"<leaf ordinal>": [{"id", "x", "y"}, ...]}, ordinals in pre-order.
Json fillings_to_json(const PseudoGuillotineTree& t, const std::map<int, std::vector<PlacedItem>>& fillings);
std::map<int, std::vector<PlacedItem>> fillings_from_json(const Json& j, const PseudoGuillotineTree& t,
                                                          const Instance& inst);

struct Composition {
  Packing packing;
  GuillotineTree tree;
};

/// Items per leaf index. Every filling is validated against its compartment;
/// a failure raises InputError naming the leaf.
Composition compose_pseudo(const PseudoGuillotineTree& t, const std::map<int, std::vector<PlacedItem>>& fillings,
                           std::shared_ptr<const Instance> inst, const NiceContext& ctx);

struct BoundaryL {
  Packing packing;  // every item, rearranged
  GuillotineTree tree;
  LRegion region;   // arms w_L + w_R and h_B + h_T
  Rect rest;        // where B_k now lies
  std::vector<Rect> slabs;  // new positions of B_0 .. B_{k-1}
  int hugging_cuts = 0;
};

/// Follows cuts closer than eps_large * N / 4 to a knapsack edge, then moves
/// the peeled slabs into a boundary L and B_k into the complementary corner.
BoundaryL extract_boundary_l(const Packing& p, const GuillotineTree& t, const Rational& eps_large);

}  // namespace guillopack
