#include "guillopack/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace guillopack {

bool overlaps(const Rect& a, const Rect& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

Instance::Instance(Coord side, std::vector<Item> items, bool allow_rotation)
    : side_(side), items_(std::move(items)), allow_rotation_(allow_rotation) {
  if (side_ < 1) throw InputError("knapsack side must be >= 1");
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const Item& it = items_[i];
    if (it.width < 1 || it.height < 1)
      throw InputError("item " + std::to_string(it.id) + " has a non-positive side");
    if (it.profit < 0)
      throw InputError("item " + std::to_string(it.id) + " has negative profit");
    bool fits = it.width <= side_ && it.height <= side_;
    if (!fits)
      throw InputError("item " + std::to_string(it.id) + " does not fit the knapsack");
    if (!index_.emplace(it.id, i).second)
      throw InputError("duplicate item id " + std::to_string(it.id));
  }
}

const Item& Instance::item(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown item id " + std::to_string(id));
  return items_[it->second];
}

Profit Instance::total_profit() const {
  return std::accumulate(items_.begin(), items_.end(), Profit{0},
                         [](Profit s, const Item& i) { return s + i.profit; });
}

Rect placement_rect(const Item& item, const Placement& p) {
  Coord w = p.rotated ? item.height : item.width;
  Coord h = p.rotated ? item.width : item.height;
  return {p.x, p.y, p.x + w, p.y + h};
}

Placement placement_of(const PlacedItem& pi) {
  bool rotated = pi.rect.width() != pi.item.width;
  return {pi.item.id, pi.rect.x0, pi.rect.y0, rotated};
}

Packing::Packing(std::shared_ptr<const Instance> instance, std::vector<Placement> placements)
    : instance_(std::move(instance)), placements_(std::move(placements)) {
  if (!instance_) throw InputError("packing without an instance");
}

std::vector<PlacedItem> Packing::placed() const {
  std::vector<PlacedItem> out;
  out.reserve(placements_.size());
  for (const Placement& p : placements_) {
    const Item& it = instance_->item(p.item_id);
    out.push_back({it, placement_rect(it, p)});
  }
  return out;
}

Packing Packing::from_placed(std::shared_ptr<const Instance> instance,
                             std::span<const PlacedItem> items) {
  std::vector<Placement> ps;
  ps.reserve(items.size());
  for (const PlacedItem& pi : items) ps.push_back(placement_of(pi));
  return Packing(std::move(instance), std::move(ps));
}

std::vector<Violation> validate_packing(const Packing& p) {
  std::vector<Violation> out;
  const Instance& inst = p.instance();
  std::vector<PlacedItem> known;
  std::unordered_map<int, int> seen;
  for (const Placement& pl : p.placements()) {
    if (!inst.has_item(pl.item_id)) {
      out.push_back({ViolationKind::UnknownItem, {pl.item_id}, "item id not in instance"});
      continue;
    }
    if (seen[pl.item_id]++ == 1)
      out.push_back({ViolationKind::DuplicateItem, {pl.item_id}, "item placed more than once"});
    if (pl.rotated && !inst.allow_rotation())
      out.push_back({ViolationKind::IllegalRotation, {pl.item_id}, "rotation not allowed"});
    const Item& it = inst.item(pl.item_id);
    Rect r = placement_rect(it, pl);
    if (r.x0 < 0 || r.y0 < 0 || r.x1 > inst.side() || r.y1 > inst.side()) {
      std::ostringstream msg;
      msg << "rect (" << r.x0 << "," << r.y0 << ")-(" << r.x1 << "," << r.y1
          << ") leaves the knapsack";
      out.push_back({ViolationKind::OutOfBounds, {pl.item_id}, msg.str()});
    }
    known.push_back({it, r});
  }
  // Sweep by x0 so that only x-overlapping pairs are compared.
  std::vector<std::size_t> order(known.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (known[a].rect.x0 != known[b].rect.x0) return known[a].rect.x0 < known[b].rect.x0;
    return known[a].item.id < known[b].item.id;
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const PlacedItem& a = known[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const PlacedItem& b = known[order[j]];
      if (b.rect.x0 >= a.rect.x1) break;
      if (overlaps(a.rect, b.rect)) {
        int lo = std::min(a.item.id, b.item.id), hi = std::max(a.item.id, b.item.id);
        out.push_back({ViolationKind::Overlap, {lo, hi}, "interiors intersect"});
      }
    }
  }
  return out;
}

Profit profit(std::span<const PlacedItem> items) {
  Profit s = 0;
  for (const auto& pi : items) s += pi.item.profit;
  return s;
}

Profit profit(const Packing& p) {
  Profit s = 0;
  for (const Placement& pl : p.placements()) s += p.instance().item(pl.item_id).profit;
  return s;
}

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::UnknownItem: return "unknown_item";
    case ViolationKind::DuplicateItem: return "duplicate_item";
    case ViolationKind::OutOfBounds: return "out_of_bounds";
    case ViolationKind::Overlap: return "overlap";
    case ViolationKind::IllegalRotation: return "illegal_rotation";
  }
  return "unknown";
}

std::int64_t effective_budget(std::int64_t requested) {
  const char* env = std::getenv("GUILLOPACK_BUDGET");
  if (env == nullptr || *env == '\0') return requested;
  char* end = nullptr;
  long long cap = std::strtoll(env, &end, 10);
  if (end == env || *end != '\0' || cap < 0) throw InputError("GUILLOPACK_BUDGET must be a non-negative integer");
  return std::min<std::int64_t>(requested, cap);
}

}  // namespace guillopack
