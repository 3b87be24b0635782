#include "guillopack/lpack.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace guillopack {

bool LShape::contains(const Rect& r) const {
  if (!box.contains(r)) return false;
  bool in_bottom = r.y1 <= box.y0 + arm_h;
  bool in_left = r.x1 <= box.x0 + arm_v;
  if (in_bottom || in_left) return true;
  // Otherwise the rect must avoid the hole [x0+a, x1] x [y0+b, y1].
  return !overlaps(r, Rect{box.x0 + arm_v, box.y0 + arm_h, box.x1, box.y1});
}

namespace {

bool wider(const Item& a, const Item& b) { return a.width != b.width ? a.width > b.width : a.id < b.id; }
bool taller(const Item& a, const Item& b) { return a.height != b.height ? a.height > b.height : a.id < b.id; }

}  // namespace

std::optional<std::vector<PlacedItem>> place_in_lshape(std::span<const Item> horizontals,
                                                       std::span<const Item> verticals,
                                                       const LShape& shape) {
  std::vector<Item> hs(horizontals.begin(), horizontals.end());
  std::vector<Item> vs(verticals.begin(), verticals.end());
  std::sort(hs.begin(), hs.end(), wider);
  std::sort(vs.begin(), vs.end(), taller);
  const Rect& b = shape.box;
  std::vector<PlacedItem> out;
  Coord y = b.y0;
  for (const auto& it : hs) {
    if (it.width > b.width()) return std::nullopt;
    out.push_back({it, Rect{b.x1 - it.width, y, b.x1, y + it.height}});
    y += it.height;
  }
  if (y > b.y0 + shape.arm_h) return std::nullopt;
  std::size_t first_vertical = out.size();
  Coord x = b.x0;
  for (const auto& it : vs) {
    if (it.height > b.height()) return std::nullopt;
    out.push_back({it, Rect{x, b.y1 - it.height, x + it.width, b.y1}});
    x += it.width;
  }
  if (x > b.x0 + shape.arm_v) return std::nullopt;
  for (std::size_t i = 0; i < first_vertical; ++i)
    for (std::size_t j = first_vertical; j < out.size(); ++j)
      if (overlaps(out[i].rect, out[j].rect)) return std::nullopt;
  return out;
}

namespace {

void split_long(std::span<const Item> items, Coord n, std::vector<Item>& wide, std::vector<Item>& tall) {
  for (const auto& it : items) {
    bool w = 2 * it.width > n, t = 2 * it.height > n;
    if (w && t) throw InputError("item " + std::to_string(it.id) + " is wide and tall");
    if (!w && !t) throw InputError("item " + std::to_string(it.id) + " is not long");
    (w ? wide : tall).push_back(it);
  }
}

}  // namespace

LPlacementCanonical canonical_l_place(std::span<const Item> items, Coord n) {
  std::vector<Item> wide, tall;
  split_long(items, n, wide, tall);
  LPlacementCanonical out;
  std::sort(wide.begin(), wide.end(), wider);
  std::sort(tall.begin(), tall.end(), taller);
  for (const auto& it : wide) out.wide_order.push_back(it.id);
  for (const auto& it : tall) out.tall_order.push_back(it.id);
  auto placed = place_in_lshape(wide, tall, LShape{Rect{0, 0, n, n}, n, n});
  out.feasible = placed.has_value();
  if (placed) out.items = std::move(*placed);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<PlacedItem> transposed(std::vector<PlacedItem> v) {
  for (auto& p : v) p.rect = p.rect.transposed();
  return v;
}

void shift_y(std::vector<PlacedItem>& v, Coord dy) {
  for (auto& p : v) {
    p.rect.y0 += dy;
    p.rect.y1 += dy;
  }
}

class LBuilder {
 public:
  LBuilder(const GuillotineTree& t, Coord n) : tree_(t), n_(n) {}

  // Items are in the current frame (transposed when `flip`); the result is
  // anchored at the bottom-left corner of the node's region in that frame.
  std::vector<PlacedItem> build(int node, std::vector<PlacedItem> items, bool flip) const {
    if (items.empty()) return items;
    const GuillotineNode& nd = tree_.node(node);
    Rect region = flip ? nd.region.transposed() : nd.region;
    if (items.size() == 1 || nd.is_leaf()) {
      if (items.size() != 1) throw std::logic_error("leaf with several items");
      PlacedItem p = items.front();
      p.rect = Rect{region.x0, region.y0, region.x0 + p.rect.width(), region.y0 + p.rect.height()};
      return {p};
    }
    Orientation o = *nd.cut;
    if (flip) o = other(o);
    if (o == Orientation::Vertical) return transposed(build(node, transposed(std::move(items)), !flip));

    Coord c = nd.position;
    std::vector<PlacedItem> lo, hi;
    for (auto& p : items) (p.rect.y1 <= c ? lo : hi).push_back(p);
    if (lo.empty()) {
      auto r = build(nd.high, std::move(hi), flip);
      shift_y(r, region.y0 - c);
      return r;
    }
    if (hi.empty()) return build(nd.low, std::move(lo), flip);

    auto frame_tall = [&](const PlacedItem& p) { return 2 * p.rect.height() > n_; };
    auto wide_height = [&](const std::vector<PlacedItem>& v) {
      Coord s = 0;
      for (const auto& p : v)
        if (!frame_tall(p)) s += p.rect.height();
      return s;
    };
    bool hi_tall = std::any_of(hi.begin(), hi.end(), frame_tall);
    bool lo_tall = std::any_of(lo.begin(), lo.end(), frame_tall);
    auto p1 = build(nd.low, std::move(lo), flip);
    auto p2 = build(nd.high, std::move(hi), flip);
    if (!hi_tall) {
      Coord hw2 = wide_height(p2);
      p2 = mirror(p2, Axis::X, Rect{region.x0, c, region.x1, region.y1});
      p1 = mirror(p1, Axis::X, Rect{region.x0, region.y0, region.x1, region.y1 - hw2});
      p1.insert(p1.end(), p2.begin(), p2.end());
      return mirror(p1, Axis::X, region);
    }
    if (!lo_tall) {
      Coord hw1 = wide_height(p1);
      shift_y(p2, region.y0 + hw1 - c);
      p1.insert(p1.end(), p2.begin(), p2.end());
      return p1;
    }
    throw std::logic_error("tall items on both sides of a horizontal cut");
  }

 private:
  const GuillotineTree& tree_;
  Coord n_;
};

}  // namespace

LBuild build_l_from_guillotine(const Packing& p, const GuillotineTree& t) {
  Coord n = p.instance().side();
  auto placed = p.placed();
  if (!(t.node(t.root()).region == Rect{0, 0, n, n})) throw InputError("tree root must be the knapsack");
  if (auto problems = verify_tree(t, placed); !problems.empty())
    throw InputError("tree does not certify the packing: " + problems.front());
  LRegion region{n, 0, 0};
  for (const auto& pi : placed) {
    bool w = 2 * pi.rect.width() > n, h = 2 * pi.rect.height() > n;
    if (w && h) throw InputError("item " + std::to_string(pi.item.id) + " is wide and tall");
    if (!w && !h) throw InputError("item " + std::to_string(pi.item.id) + " is not long");
    if (w) region.h_wide += pi.rect.height();
    else region.w_tall += pi.rect.width();
  }
  auto out = LBuilder(t, n).build(t.root(), placed, false);
  LShape shape = region.shape();
  for (const auto& pi : out)
    if (!shape.contains(pi.rect)) throw std::logic_error("L construction left the region");
  auto sep = check_guillotine(out, Rect{0, 0, n, n});
  if (!is_separable(sep)) throw std::logic_error("L construction lost separability");
  return {Packing::from_placed(p.instance_ptr(), out), region, std::get<GuillotineTree>(std::move(sep))};
}

// ---------------------------------------------------------------------------

namespace {

class LCardinality {
 public:
  LCardinality(std::span<const Item> hs, std::span<const Item> vs, const LShape& shape)
      : shape_(shape), W_(shape.box.width()), H_(shape.box.height()) {
    std::vector<Item> h(hs.begin(), hs.end()), v(vs.begin(), vs.end());
    std::sort(h.begin(), h.end(), wider);
    std::sort(v.begin(), v.end(), taller);
    // Merge by relative longer side: w/W against h/H.
    std::size_t i = 0, j = 0;
    while (i < h.size() || j < v.size()) {
      bool take_h = j == v.size() || (i < h.size() && h[i].width * H_ >= v[j].height * W_);
      if (take_h) order_.push_back({h[i++], true});
      else order_.push_back({v[j++], false});
    }
    std::size_t m = order_.size();
    future_h_width_.assign(m + 1, 0);
    future_v_height_.assign(m + 1, 0);
    for (std::size_t k = m; k-- > 0;) {
      future_h_width_[k] = future_h_width_[k + 1];
      future_v_height_[k] = future_v_height_[k + 1];
      if (order_[k].horizontal) future_h_width_[k] = std::max(future_h_width_[k], order_[k].item.width);
      else future_v_height_[k] = std::max(future_v_height_[k], order_[k].item.height);
    }
  }

  LSolution run() {
    State s;
    best(0, s);
    LSolution out;
    State cur;
    for (std::size_t k = 0; k < order_.size(); ++k) {
      const auto& e = memo_.at(key(k, cur));
      if (!e.take) {
        cur = advance(k + 1, cur);
        continue;
      }
      cur = *add(k, cur);
      out.chosen.push_back(order_[k].item.id);
    }
    std::sort(out.chosen.begin(), out.chosen.end());
    out.value = static_cast<Profit>(out.chosen.size());
    std::vector<Item> hs, vs;
    for (const auto& e : order_)
      if (std::binary_search(out.chosen.begin(), out.chosen.end(), e.item.id))
        (e.horizontal ? hs : vs).push_back(e.item);
    auto placed = place_in_lshape(hs, vs, shape_);
    if (!placed) throw std::logic_error("L solver chose an infeasible set");
    out.placement = std::move(*placed);
    return out;
  }

 private:
  struct Entry {
    Item item;
    bool horizontal;
  };
  struct State {
    Coord y = 0;  // stack heights used, relative to the box
    Coord x = 0;
    std::vector<std::pair<Coord, Coord>> hs;  // (width, top) of chosen horizontals that still matter
    std::vector<std::pair<Coord, Coord>> vs;  // (height, right) of chosen verticals that still matter
  };
  struct Memo {
    int value;
    bool take;
  };

  std::string key(std::size_t k, const State& s) const {
    std::string out;
    auto put = [&](Coord v) { out.append(reinterpret_cast<const char*>(&v), sizeof v); };
    put(static_cast<Coord>(k));
    put(s.y);
    put(s.x);
    put(static_cast<Coord>(s.hs.size()));
    for (auto [a, b] : s.hs) put(a), put(b);
    for (auto [a, b] : s.vs) put(a), put(b);
    return out;
  }

  // Drops entries that can no longer conflict with items from index k on.
  State advance(std::size_t k, State s) const {
    Coord fh = future_h_width_[k], fv = future_v_height_[k];
    std::erase_if(s.hs, [&](auto e) { return !(e.second + fv > H_ && e.first + shape_.arm_v > W_); });
    std::erase_if(s.vs, [&](auto e) { return !(e.second + fh > W_ && e.first + shape_.arm_h > H_); });
    return s;
  }

  std::optional<State> add(std::size_t k, const State& s) const {
    const Entry& e = order_[k];
    State n = s;
    if (e.horizontal) {
      if (e.item.width > W_ || s.y + e.item.height > shape_.arm_h) return std::nullopt;
      Coord top = s.y + e.item.height;
      for (auto [h, right] : s.vs)
        if (right + e.item.width > W_ && top + h > H_) return std::nullopt;
      n.y = top;
      n.hs.emplace_back(e.item.width, top);
    } else {
      if (e.item.height > H_ || s.x + e.item.width > shape_.arm_v) return std::nullopt;
      Coord right = s.x + e.item.width;
      for (auto [w, top] : s.hs)
        if (top + e.item.height > H_ && right + w > W_) return std::nullopt;
      n.x = right;
      n.vs.emplace_back(e.item.height, right);
    }
    return advance(k + 1, n);
  }

  int best(std::size_t k, const State& s) {
    if (k == order_.size()) return 0;
    std::string kk = key(k, s);
    if (auto it = memo_.find(kk); it != memo_.end()) return it->second.value;
    Memo m{best(k + 1, advance(k + 1, s)), false};
    if (auto n = add(k, s)) {
      int v = 1 + best(k + 1, *n);
      if (v > m.value) m = {v, true};
    }
    memo_[kk] = m;
    return m.value;
  }

  LShape shape_;
  Coord W_, H_;
  std::vector<Entry> order_;
  std::vector<Coord> future_h_width_, future_v_height_;
  std::unordered_map<std::string, Memo> memo_;
};

}  // namespace

LSolution solve_l_cardinality(std::span<const Item> horizontals, std::span<const Item> verticals,
                              const LShape& shape) {
  return LCardinality(horizontals, verticals, shape).run();
}

LSolution solve_l_cardinality(std::span<const Item> items, const LRegion& region) {
  std::vector<Item> wide, tall;
  split_long(items, region.n, wide, tall);
  return solve_l_cardinality(wide, tall, region.shape());
}

LSolution solve_l_profit_smalln(std::span<const Item> horizontals, std::span<const Item> verticals,
                                const LShape& shape) {
  std::size_t m = horizontals.size() + verticals.size();
  if (m > 16) throw InputError("solve_l_profit_smalln handles at most 16 items");
  LSolution best;
  std::vector<Item> hs, vs;
  for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
    hs.clear();
    vs.clear();
    Profit value = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(mask >> i & 1U)) continue;
      const Item& it = i < horizontals.size() ? horizontals[i] : verticals[i - horizontals.size()];
      (i < horizontals.size() ? hs : vs).push_back(it);
      value += it.profit;
    }
    if (mask != 0 && value <= best.value) continue;
    auto placed = place_in_lshape(hs, vs, shape);
    if (!placed) continue;
    best.value = value;
    best.placement = std::move(*placed);
    best.chosen.clear();
    for (const auto& p : best.placement) best.chosen.push_back(p.item.id);
    std::sort(best.chosen.begin(), best.chosen.end());
  }
  return best;
}

LSolution solve_l_profit_smalln(std::span<const Item> items, const LRegion& region) {
  if (items.size() > 16) throw InputError("solve_l_profit_smalln handles at most 16 items");
  std::vector<Item> wide, tall;
  split_long(items, region.n, wide, tall);
  return solve_l_profit_smalln(wide, tall, region.shape());
}

}  // namespace guillopack
