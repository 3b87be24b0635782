#include "guillopack/guillotine.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace guillopack {

GuillotineTree::GuillotineTree(Rect root_region) {
  GuillotineNode root;
  root.region = root_region;
  nodes_.push_back(root);
}

std::pair<int, int> GuillotineTree::split(int leaf, Orientation o, Coord position) {
  GuillotineNode& n = nodes_.at(static_cast<std::size_t>(leaf));
  if (!n.is_leaf()) throw std::logic_error("split: node is not a leaf");
  if (n.item_id) throw std::logic_error("split: leaf already holds an item");
  Rect r = n.region;
  Rect lo = r, hi = r;
  if (o == Orientation::Horizontal) {
    if (position <= r.y0 || position >= r.y1) throw std::logic_error("split: cut outside region");
    lo.y1 = position;
    hi.y0 = position;
  } else {
    if (position <= r.x0 || position >= r.x1) throw std::logic_error("split: cut outside region");
    lo.x1 = position;
    hi.x0 = position;
  }
  n.cut = o;
  n.position = position;
  int lo_index = static_cast<int>(nodes_.size());
  n.low = lo_index;
  n.high = lo_index + 1;
  GuillotineNode a, b;
  a.region = lo;
  b.region = hi;
  nodes_.push_back(a);
  nodes_.push_back(b);
  return {lo_index, lo_index + 1};
}

void GuillotineTree::assign_item(int leaf, int item_id) {
  GuillotineNode& n = nodes_.at(static_cast<std::size_t>(leaf));
  if (!n.is_leaf()) throw std::logic_error("assign_item: node is not a leaf");
  n.item_id = item_id;
}

std::vector<int> GuillotineTree::graft(int leaf, const GuillotineTree& sub) {
  const GuillotineNode& target = nodes_.at(static_cast<std::size_t>(leaf));
  if (!target.is_leaf() || target.item_id)
    throw std::logic_error("graft: target must be an empty leaf");
  if (!(target.region == sub.node(0).region)) throw std::logic_error("graft: region mismatch");
  int offset = static_cast<int>(nodes_.size()) - 1;
  auto remap = [&](int i) { return i == 0 ? leaf : i + offset; };
  std::vector<int> mapping(sub.nodes_.size());
  for (std::size_t i = 0; i < mapping.size(); ++i) mapping[i] = remap(static_cast<int>(i));
  for (std::size_t i = 0; i < sub.nodes_.size(); ++i) {
    GuillotineNode n = sub.nodes_[i];
    if (!n.is_leaf()) {
      n.low = remap(n.low);
      n.high = remap(n.high);
    }
    if (i == 0)
      nodes_[static_cast<std::size_t>(leaf)] = n;
    else
      nodes_.push_back(n);
  }
  return mapping;
}

std::vector<int> GuillotineTree::leaves() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].is_leaf()) out.push_back(static_cast<int>(i));
  return out;
}

int GuillotineTree::cut_count() const {
  int c = 0;
  for (const auto& n : nodes_) c += n.is_leaf() ? 0 : 1;
  return c;
}

GuillotineTree subtree(const GuillotineTree& t, int node) {
  GuillotineTree out(t.node(node).region);
  std::function<void(int, int)> copy = [&](int src, int dst) {
    const auto& n = t.node(src);
    if (n.is_leaf()) {
      if (n.item_id) out.assign_item(dst, *n.item_id);
      return;
    }
    auto [lo, hi] = out.split(dst, *n.cut, n.position);
    copy(n.low, lo);
    copy(n.high, hi);
  };
  copy(node, out.root());
  return out;
}

GuillotineTree translated(const GuillotineTree& t, Coord dx, Coord dy) {
  Rect r = t.node(t.root()).region;
  GuillotineTree out(Rect{r.x0 + dx, r.y0 + dy, r.x1 + dx, r.y1 + dy});
  std::function<void(int, int)> copy = [&](int src, int dst) {
    const auto& n = t.node(src);
    if (n.is_leaf()) {
      if (n.item_id) out.assign_item(dst, *n.item_id);
      return;
    }
    Coord shift = *n.cut == Orientation::Horizontal ? dy : dx;
    auto [lo, hi] = out.split(dst, *n.cut, n.position + shift);
    copy(n.low, lo);
    copy(n.high, hi);
  };
  copy(t.root(), out.root());
  return out;
}

namespace {

Coord lo_of(const Rect& r, Orientation o) { return o == Orientation::Horizontal ? r.y0 : r.x0; }
Coord hi_of(const Rect& r, Orientation o) { return o == Orientation::Horizontal ? r.y1 : r.x1; }

// Smallest coordinate of a cut separating the items along `o`, if any.
std::optional<Coord> separating_cut(std::span<const PlacedItem> items,
                                    const std::vector<std::size_t>& members, Orientation o) {
  std::vector<std::pair<Coord, Coord>> spans;
  spans.reserve(members.size());
  for (std::size_t m : members) spans.emplace_back(lo_of(items[m].rect, o), hi_of(items[m].rect, o));
  std::sort(spans.begin(), spans.end());
  Coord reach = spans.front().second;
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first >= reach) return reach;
    reach = std::max(reach, spans[i].second);
  }
  return std::nullopt;
}

}  // namespace

SeparabilityResult check_guillotine(std::span<const PlacedItem> items, Rect region) {
  GuillotineTree tree(region);
  struct Task {
    int node;
    std::vector<std::size_t> members;
  };
  std::vector<std::size_t> all(items.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<Task> stack{{0, all}};
  while (!stack.empty()) {
    Task t = std::move(stack.back());
    stack.pop_back();
    if (t.members.empty()) continue;
    if (t.members.size() == 1) {
      tree.assign_item(t.node, items[t.members.front()].item.id);
      continue;
    }
    std::optional<Orientation> orient;
    std::optional<Coord> pos = separating_cut(items, t.members, Orientation::Horizontal);
    if (pos) {
      orient = Orientation::Horizontal;
    } else if ((pos = separating_cut(items, t.members, Orientation::Vertical))) {
      orient = Orientation::Vertical;
    }
    if (!orient) {
      NotSeparable ns{tree.node(t.node).region, {}};
      for (std::size_t m : t.members) ns.item_ids.push_back(items[m].item.id);
      std::sort(ns.item_ids.begin(), ns.item_ids.end());
      return ns;
    }
    auto [lo, hi] = tree.split(t.node, *orient, *pos);
    Task a{lo, {}}, b{hi, {}};
    for (std::size_t m : t.members)
      (hi_of(items[m].rect, *orient) <= *pos ? a : b).members.push_back(m);
    // Push the high side first so the low side is expanded first.
    stack.push_back(std::move(b));
    stack.push_back(std::move(a));
  }
  return tree;
}

SeparabilityResult check_guillotine(const Packing& p) {
  Coord n = p.instance().side();
  auto placed = p.placed();
  return check_guillotine(placed, Rect{0, 0, n, n});
}

std::vector<std::string> verify_tree(const GuillotineTree& tree, std::span<const PlacedItem> items) {
  std::vector<std::string> problems;
  auto report = [&](int node, const std::string& what) {
    std::ostringstream os;
    os << "node " << node << ": " << what;
    problems.push_back(os.str());
  };
  std::unordered_map<int, const PlacedItem*> by_id;
  for (const auto& pi : items) by_id[pi.item.id] = &pi;
  std::unordered_map<int, int> leaf_count;

  std::function<void(int, std::vector<const PlacedItem*>)> visit =
      [&](int index, std::vector<const PlacedItem*> inside) {
        const GuillotineNode& n = tree.node(index);
        for (const PlacedItem* pi : inside)
          if (!n.region.contains(pi->rect)) report(index, "item " + std::to_string(pi->item.id) + " straddles region");
        if (n.is_leaf()) {
          if (inside.size() > 1) report(index, "leaf holds " + std::to_string(inside.size()) + " items");
          if (n.item_id) {
            ++leaf_count[*n.item_id];
            auto it = by_id.find(*n.item_id);
            if (it == by_id.end()) {
              report(index, "leaf names unknown item " + std::to_string(*n.item_id));
            } else if (!n.region.contains(it->second->rect)) {
              report(index, "item " + std::to_string(*n.item_id) + " outside its leaf");
            }
          } else if (!inside.empty()) {
            report(index, "unlabelled leaf contains an item");
          }
          return;
        }
        Orientation o = *n.cut;
        Coord lo = lo_of(n.region, o), hi = hi_of(n.region, o);
        if (n.position <= lo || n.position >= hi) report(index, "cut not strictly inside region");
        const GuillotineNode& a = tree.node(n.low);
        const GuillotineNode& b = tree.node(n.high);
        Rect ea = n.region, eb = n.region;
        if (o == Orientation::Horizontal) {
          ea.y1 = n.position;
          eb.y0 = n.position;
        } else {
          ea.x1 = n.position;
          eb.x0 = n.position;
        }
        if (!(a.region == ea) || !(b.region == eb)) report(index, "children do not partition region");
        std::vector<const PlacedItem*> left, right;
        for (const PlacedItem* pi : inside) {
          Coord plo = lo_of(pi->rect, o), phi = hi_of(pi->rect, o);
          if (plo < n.position && n.position < phi) {
            report(index, "cut intersects item " + std::to_string(pi->item.id));
            continue;
          }
          (phi <= n.position ? left : right).push_back(pi);
        }
        visit(n.low, std::move(left));
        visit(n.high, std::move(right));
      };

  std::vector<const PlacedItem*> all;
  for (const auto& pi : items) all.push_back(&pi);
  visit(tree.root(), std::move(all));
  for (const auto& pi : items) {
    int c = leaf_count[pi.item.id];
    if (c != 1) problems.push_back("item " + std::to_string(pi.item.id) + " labels " + std::to_string(c) + " leaves");
  }
  return problems;
}

StageProfile stage_count(const GuillotineTree& tree) {
  std::vector<int> items_below(tree.size(), 0);
  // Children always have larger indices than their parent.
  for (int i = static_cast<int>(tree.size()) - 1; i >= 0; --i) {
    const auto& n = tree.node(i);
    items_below[static_cast<std::size_t>(i)] =
        n.is_leaf() ? (n.item_id ? 1 : 0)
                    : items_below[static_cast<std::size_t>(n.low)] + items_below[static_cast<std::size_t>(n.high)];
  }
  StageProfile profile;
  struct Frame {
    int node;
    std::optional<Orientation> run;
    int runs;
    std::optional<Orientation> raw_run;
    int raw;
  };
  std::vector<Frame> stack{{tree.root(), std::nullopt, 0, std::nullopt, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const auto& n = tree.node(f.node);
    if (n.is_leaf()) {
      if (n.item_id) {
        profile.leaves.push_back({*n.item_id, f.runs});
        profile.stages = std::max(profile.stages, f.runs);
        profile.raw_runs = std::max(profile.raw_runs, f.raw);
      }
      continue;
    }
    Orientation o = *n.cut;
    bool raw_new = f.raw_run != o;
    Frame base = f;
    base.raw_run = o;
    base.raw = f.raw + (raw_new ? 1 : 0);
    bool low_empty = items_below[static_cast<std::size_t>(n.low)] == 0;
    bool high_empty = items_below[static_cast<std::size_t>(n.high)] == 0;
    if (low_empty || high_empty) {
      // Trim cut: the stage state passes through unchanged.
      int keep = low_empty ? n.high : n.low;
      if (!(low_empty && high_empty)) stack.push_back({keep, f.run, f.runs, base.raw_run, base.raw});
      continue;
    }
    base.runs = f.runs + (f.run != o ? 1 : 0);
    base.run = o;
    stack.push_back({n.low, base.run, base.runs, base.raw_run, base.raw});
    stack.push_back({n.high, base.run, base.runs, base.raw_run, base.raw});
  }
  std::sort(profile.leaves.begin(), profile.leaves.end(),
            [](const LeafStage& a, const LeafStage& b) { return a.item_id < b.item_id; });
  return profile;
}

namespace {

Rect mirror_rect(const Rect& r, Axis axis, const Rect& within) {
  if (axis == Axis::Y) return {within.x0 + within.x1 - r.x1, r.y0, within.x0 + within.x1 - r.x0, r.y1};
  return {r.x0, within.y0 + within.y1 - r.y1, r.x1, within.y0 + within.y1 - r.y0};
}

}  // namespace

std::vector<PlacedItem> mirror(std::span<const PlacedItem> items, Axis axis, Rect within) {
  std::vector<PlacedItem> out;
  out.reserve(items.size());
  for (const auto& pi : items) {
    if (!within.contains(pi.rect))
      throw InputError("mirror: item " + std::to_string(pi.item.id) + " lies outside the region");
    out.push_back({pi.item, mirror_rect(pi.rect, axis, within)});
  }
  return out;
}

Packing mirror(const Packing& p, Axis axis, Rect within) {
  auto placed = p.placed();
  auto m = mirror(placed, axis, within);
  return Packing::from_placed(p.instance_ptr(), m);
}

GuillotineTree mirror(const GuillotineTree& tree, Axis axis, Rect within) {
  if (!within.contains(tree.node(0).region)) throw InputError("mirror: tree lies outside the region");
  GuillotineTree out(mirror_rect(tree.node(0).region, axis, within));
  Orientation flipped = axis == Axis::Y ? Orientation::Vertical : Orientation::Horizontal;
  std::function<void(int, int)> copy = [&](int src, int dst) {
    const auto& n = tree.node(src);
    if (n.is_leaf()) {
      if (n.item_id) out.assign_item(dst, *n.item_id);
      return;
    }
    Coord pos = n.position;
    bool swap = *n.cut == flipped;
    if (swap) pos = axis == Axis::Y ? within.x0 + within.x1 - pos : within.y0 + within.y1 - pos;
    auto [lo, hi] = out.split(dst, *n.cut, pos);
    copy(n.low, swap ? hi : lo);
    copy(n.high, swap ? lo : hi);
  };
  copy(tree.root(), out.root());
  return out;
}

// ---------------------------------------------------------------------------
// Stage-bounded exhaustive search.

namespace {

class StageSearch {
 public:
  StageSearch(const Instance& inst, std::int64_t budget) : inst_(inst), budget_(budget) {
    n_ = static_cast<int>(inst.size());
    for (const auto& it : inst.items()) items_.push_back(it);
  }

  Profit solve(Coord w, Coord h, std::uint32_t mask, int stages, int run) {
    mask = fitting(mask, w, h);
    if (mask == 0) return 0;
    std::uint64_t key = make_key(w, h, mask, stages, run);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.value;

    Entry e = leaf_entry(mask, w, h);
    Profit upper = profit_of(mask);
    if (e.value < upper) {
      if (expansions_ >= budget_) {
        complete_ = false;
      } else {
        ++expansions_;
        for (int o = 0; o < 2; ++o) {
          int child_stages;
          if (run == o + 1) {
            child_stages = stages;
          } else if (stages >= 1) {
            child_stages = stages - 1;
          } else {
            continue;
          }
          Coord extent = o == 0 ? h : w;  // o == 0: horizontal cut along y
          std::uint32_t low_bit = mask & (~mask + 1);
          std::uint32_t rest = mask ^ low_bit;
          // Left/bottom part always holds the lowest item; mirror symmetry
          // covers the opposite assignment.
          for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
            std::uint32_t first = sub | low_bit;
            std::uint32_t second = mask ^ first;
            if (second != 0 && profit_of(first) + profit_of(second) > e.value) {
              for (Coord c : sums(first, o == 0)) {
                if (c <= 0 || c >= extent) continue;
                Coord w1 = o == 0 ? w : c, h1 = o == 0 ? c : h;
                Coord w2 = o == 0 ? w : w - c, h2 = o == 0 ? h - c : h;
                Profit v = solve(w1, h1, first, child_stages, o + 1);
                if (v + profit_of(second) <= e.value) continue;
                v += solve(w2, h2, second, child_stages, o + 1);
                if (v > e.value) {
                  e.value = v;
                  e.kind = Entry::Cut;
                  e.orientation = o;
                  e.position = c;
                  e.first = first;
                  e.child_stages = child_stages;
                  if (e.value == upper) break;
                }
              }
            }
            if (e.value == upper || sub == 0) break;
          }
          if (e.value == upper) break;
        }
      }
    }
    memo_[key] = e;
    return e.value;
  }

  void rebuild(Coord x, Coord y, Coord w, Coord h, std::uint32_t mask, int stages, int run,
               GuillotineTree& tree, int node, std::vector<PlacedItem>& out) const {
    mask = fitting(mask, w, h);
    if (mask == 0) return;
    const Entry& e = memo_.at(make_key(w, h, mask, stages, run));
    if (e.kind == Entry::Leaf) {
      const Item& it = items_[static_cast<std::size_t>(e.item)];
      Coord iw = e.rotated ? it.height : it.width, ih = e.rotated ? it.width : it.height;
      out.push_back({it, Rect{x, y, x + iw, y + ih}});
      tree.assign_item(node, it.id);
      return;
    }
    if (e.kind == Entry::Empty) return;
    std::uint32_t second = mask ^ e.first;
    if (e.orientation == 0) {
      auto [lo, hi] = tree.split(node, Orientation::Horizontal, y + e.position);
      rebuild(x, y, w, e.position, e.first, e.child_stages, 1, tree, lo, out);
      rebuild(x, y + e.position, w, h - e.position, second, e.child_stages, 1, tree, hi, out);
    } else {
      auto [lo, hi] = tree.split(node, Orientation::Vertical, x + e.position);
      rebuild(x, y, e.position, h, e.first, e.child_stages, 2, tree, lo, out);
      rebuild(x + e.position, y, w - e.position, h, second, e.child_stages, 2, tree, hi, out);
    }
  }

  bool complete() const { return complete_; }
  std::int64_t expansions() const { return expansions_; }

 private:
  struct Entry {
    enum Kind : std::uint8_t { Empty, Leaf, Cut } kind = Empty;
    Profit value = 0;
    int item = -1;
    bool rotated = false;
    int orientation = 0;
    Coord position = 0;
    std::uint32_t first = 0;
    int child_stages = 0;
  };

  static std::uint64_t make_key(Coord w, Coord h, std::uint32_t mask, int stages, int run) {
    return static_cast<std::uint64_t>(w) | static_cast<std::uint64_t>(h) << 13 |
           static_cast<std::uint64_t>(mask) << 26 | static_cast<std::uint64_t>(stages) << 50 |
           static_cast<std::uint64_t>(run) << 58;
  }

  bool fits(const Item& it, Coord w, Coord h, bool& rotated) const {
    rotated = false;
    if (it.width <= w && it.height <= h) return true;
    if (inst_.allow_rotation() && it.height <= w && it.width <= h) {
      rotated = true;
      return true;
    }
    return false;
  }

  std::uint32_t fitting(std::uint32_t mask, Coord w, Coord h) const {
    std::uint32_t out = 0;
    bool rot;
    for (int i = 0; i < n_; ++i)
      if ((mask >> i & 1U) && fits(items_[static_cast<std::size_t>(i)], w, h, rot)) out |= 1U << i;
    return out;
  }

  Entry leaf_entry(std::uint32_t mask, Coord w, Coord h) const {
    Entry e;
    for (int i = 0; i < n_; ++i) {
      if (!(mask >> i & 1U)) continue;
      bool rot;
      const Item& it = items_[static_cast<std::size_t>(i)];
      if (fits(it, w, h, rot) && (e.kind == Entry::Empty || it.profit > e.value)) {
        e.kind = Entry::Leaf;
        e.value = it.profit;
        e.item = i;
        e.rotated = rot;
      }
    }
    return e;
  }

  Profit profit_of(std::uint32_t mask) const {
    Profit s = 0;
    for (int i = 0; i < n_; ++i)
      if (mask >> i & 1U) s += items_[static_cast<std::size_t>(i)].profit;
    return s;
  }

  // Subset sums of item extents along the cut axis (either side when rotation is allowed).
  const std::vector<Coord>& sums(std::uint32_t mask, bool heights) {
    std::uint64_t key = static_cast<std::uint64_t>(mask) << 1 | (heights ? 1U : 0U);
    if (auto it = sums_.find(key); it != sums_.end()) return it->second;
    Coord cap = inst_.side();
    std::vector<char> reach(static_cast<std::size_t>(cap) + 1, 0);
    reach[0] = 1;
    for (int i = 0; i < n_; ++i) {
      if (!(mask >> i & 1U)) continue;
      const Item& it = items_[static_cast<std::size_t>(i)];
      Coord a = heights ? it.height : it.width;
      Coord b = inst_.allow_rotation() ? (heights ? it.width : it.height) : a;
      for (Coord v = cap; v >= 0; --v) {
        if (!reach[static_cast<std::size_t>(v)]) continue;
        if (v + a <= cap) reach[static_cast<std::size_t>(v + a)] |= 2;
        if (v + b <= cap) reach[static_cast<std::size_t>(v + b)] |= 2;
      }
      for (auto& r : reach) r = r ? 1 : 0;
    }
    std::vector<Coord> out;
    for (Coord v = 1; v <= cap; ++v)
      if (reach[static_cast<std::size_t>(v)]) out.push_back(v);
    return sums_.emplace(key, std::move(out)).first->second;
  }

  const Instance& inst_;
  int n_ = 0;
  std::vector<Item> items_;
  std::int64_t budget_;
  std::int64_t expansions_ = 0;
  bool complete_ = true;
  std::unordered_map<std::uint64_t, Entry> memo_;
  std::unordered_map<std::uint64_t, std::vector<Coord>> sums_;
};

}  // namespace

StageBoundedResult stage_bounded_best(const std::shared_ptr<const Instance>& inst, int max_stages,
                                      std::int64_t budget) {
  if (inst->size() > 20) throw InputError("stage_bounded_best: at most 20 items supported");
  if (inst->side() >= (Coord{1} << 13)) throw InputError("stage_bounded_best: side too large");
  if (max_stages < 0) throw InputError("stage_bounded_best: negative stage bound");
  max_stages = std::min(max_stages, 255);
  StageSearch search(*inst, effective_budget(budget));
  Coord n = inst->side();
  std::uint32_t all = inst->size() == 0 ? 0 : (inst->size() == 32 ? ~0U : (1U << inst->size()) - 1U);
  StageBoundedResult result;
  result.value = search.solve(n, n, all, max_stages, 0);
  result.tree = GuillotineTree(Rect{0, 0, n, n});
  std::vector<PlacedItem> placed;
  search.rebuild(0, 0, n, n, all, max_stages, 0, result.tree, result.tree.root(), placed);
  result.packing = Packing::from_placed(inst, placed);
  result.complete = search.complete();
  result.expansions = search.expansions();
  return result;
}

}  // namespace guillopack
