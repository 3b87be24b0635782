#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace guillopack {

using Coord = std::int64_t;
using Profit = std::int64_t;

/// Thrown for malformed inputs: bad dimensions, unknown ids, broken files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search ran out of its state budget before finishing.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned rectangle [x0,x1] x [y0,y1]. Items are treated as open sets,
/// so rectangles sharing an edge do not overlap.
struct Rect {
  Coord x0 = 0;
  Coord y0 = 0;
  Coord x1 = 0;
  Coord y1 = 0;

  Coord width() const { return x1 - x0; }
  Coord height() const { return y1 - y0; }
  Coord area() const { return width() * height(); }
  bool nondegenerate() const { return x0 < x1 && y0 < y1; }
  bool contains(const Rect& r) const {
    return x0 <= r.x0 && r.x1 <= x1 && y0 <= r.y0 && r.y1 <= y1;
  }
  Rect transposed() const { return {y0, x0, y1, x1}; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// True iff the open interiors of a and b intersect.
bool overlaps(const Rect& a, const Rect& b);

enum class Axis { X, Y };

struct Item {
  int id = 0;
  Coord width = 1;
  Coord height = 1;
  Profit profit = 1;

  friend bool operator==(const Item&, const Item&) = default;
};

/// A square knapsack of side N together with the candidate items.
/// Construction validates the invariants; the value is immutable afterwards.
class Instance {
 public:
  Instance() = default;
  Instance(Coord side, std::vector<Item> items, bool allow_rotation = false);

  Coord side() const { return side_; }
  bool allow_rotation() const { return allow_rotation_; }
  const std::vector<Item>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

  const Item& item(int id) const;
  bool has_item(int id) const { return index_.count(id) != 0; }
  Profit total_profit() const;

 private:
  Coord side_ = 1;
  std::vector<Item> items_;
  bool allow_rotation_ = false;
  std::unordered_map<int, std::size_t> index_;
};

struct Placement {
  int item_id = 0;
  Coord x = 0;
  Coord y = 0;
  bool rotated = false;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// An item together with the rectangle it occupies.
struct PlacedItem {
  Item item;
  Rect rect;
};

Rect placement_rect(const Item& item, const Placement& p);
Placement placement_of(const PlacedItem& pi);

class Packing {
 public:
  Packing() : instance_(std::make_shared<const Instance>()) {}
  explicit Packing(std::shared_ptr<const Instance> instance,
                   std::vector<Placement> placements = {});

  const Instance& instance() const { return *instance_; }
  const std::shared_ptr<const Instance>& instance_ptr() const {
    return instance_;
  }
  const std::vector<Placement>& placements() const { return placements_; }
  std::size_t size() const { return placements_.size(); }
  bool empty() const { return placements_.empty(); }

  /// Placed items in placement order. Unknown ids raise InputError.
  std::vector<PlacedItem> placed() const;

  /// Builds a packing from rectangles that already carry their items.
  static Packing from_placed(std::shared_ptr<const Instance> instance,
                             std::span<const PlacedItem> items);

 private:
  std::shared_ptr<const Instance> instance_;
  std::vector<Placement> placements_;
};

enum class ViolationKind { UnknownItem, DuplicateItem, OutOfBounds, Overlap, IllegalRotation };

struct Violation {
  ViolationKind kind;
  std::vector<int> item_ids;
  std::string message;
};

/// Empty result means the packing is valid.
std::vector<Violation> validate_packing(const Packing& p);

Profit profit(const Packing& p);
Profit profit(std::span<const PlacedItem> items);

std::string to_string(ViolationKind k);

/// Caps a search budget by GUILLOPACK_BUDGET when that variable is set.
std::int64_t effective_budget(std::int64_t requested);

}  // namespace guillopack
