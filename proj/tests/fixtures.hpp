#pragma once
// Seeded fixture builders shared by unit and acceptance tests.

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "guillopack/compartments.hpp"
#include "guillopack/solver.hpp"
#include "guillopack/core.hpp"
#include "guillopack/guillotine.hpp"

namespace fixtures {

using namespace guillopack;

// Long items for an N x N knapsack: wide (w > N/2) or tall (h > N/2), thin.
inline std::vector<Item> random_long_items(std::mt19937_64& rng, int count, Coord n, Coord max_thin) {
  std::vector<Item> out;
  std::uniform_int_distribution<Coord> lng(n / 2 + 1, n), thin(1, max_thin);
  std::uniform_int_distribution<int> coin(0, 1), prof(1, 9);
  for (int i = 0; i < count; ++i) {
    Coord a = lng(rng), b = thin(rng);
    bool wide = coin(rng) == 0;
    out.push_back({i + 1, wide ? a : b, wide ? b : a, prof(rng)});
  }
  return out;
}

// A separable packing of long items built by recursive random guillotine
// cuts: each leaf region whose long side exceeds N/2 may host one item.
inline Packing random_separable_long_packing(std::uint64_t seed, int max_items, Coord n) {
  std::mt19937_64 rng(seed);
  std::vector<Item> items;
  std::vector<Placement> placements;
  std::vector<Rect> regions{{0, 0, n, n}};
  int id = 0;
  while (!regions.empty() && id < max_items) {
    std::uniform_int_distribution<std::size_t> pick(0, regions.size() - 1);
    std::size_t k = pick(rng);
    Rect r = regions[k];
    regions.erase(regions.begin() + static_cast<long>(k));
    bool can_wide = 2 * r.width() > n, can_tall = 2 * r.height() > n;
    if (!can_wide && !can_tall) continue;
    std::uniform_int_distribution<int> coin(0, 2);
    if (coin(rng) == 0 || (r.width() < 2 && r.height() < 2)) {
      bool wide = can_wide && (!can_tall || coin(rng) == 1);
      Coord a = std::uniform_int_distribution<Coord>(n / 2 + 1, wide ? r.width() : r.height())(rng);
      Coord thin_cap = std::min<Coord>(std::max<Coord>(1, n / 6), wide ? r.height() : r.width());
      if (2 * thin_cap > n) thin_cap = n / 2;
      Coord b = std::uniform_int_distribution<Coord>(1, std::max<Coord>(1, thin_cap))(rng);
      Coord w = wide ? a : b, h = wide ? b : a;
      Coord x = std::uniform_int_distribution<Coord>(r.x0, r.x1 - w)(rng);
      Coord y = std::uniform_int_distribution<Coord>(r.y0, r.y1 - h)(rng);
      ++id;
      items.push_back({id, w, h, std::uniform_int_distribution<Profit>(1, 9)(rng)});
      placements.push_back({id, x, y, false});
      // Split the leftover around the item with guillotine cuts so more items can follow.
      if (y > r.y0) regions.push_back({r.x0, r.y0, r.x1, y});
      if (y + h < r.y1) regions.push_back({r.x0, y + h, r.x1, r.y1});
      if (x > r.x0) regions.push_back({r.x0, y, x, y + h});
      if (x + w < r.x1) regions.push_back({x + w, y, r.x1, y + h});
      continue;
    }
    bool horiz = r.height() >= 2 && (r.width() < 2 || coin(rng) == 0);
    if (horiz) {
      Coord c = std::uniform_int_distribution<Coord>(r.y0 + 1, r.y1 - 1)(rng);
      regions.push_back({r.x0, r.y0, r.x1, c});
      regions.push_back({r.x0, c, r.x1, r.y1});
    } else {
      Coord c = std::uniform_int_distribution<Coord>(r.x0 + 1, r.x1 - 1)(rng);
      regions.push_back({r.x0, r.y0, c, r.y1});
      regions.push_back({c, r.y0, r.x1, r.y1});
    }
  }
  auto inst = std::make_shared<const Instance>(n, std::move(items));
  return Packing(inst, std::move(placements));
}


// A random pseudo-guillotine tree (depth <= 3) over a random N, with greedy
// nice fillings for every leaf: stacks, shelves of small items, or L-arms.
struct RandomCompartments {
  std::shared_ptr<const Instance> instance;
  PseudoGuillotineTree tree{1};
  std::map<int, std::vector<PlacedItem>> fillings;
};

inline RandomCompartments random_compartment_set(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](Coord lo, Coord hi) { return std::uniform_int_distribution<Coord>(lo, hi)(rng); };
  const Coord n = uni(16, 40);
  RandomCompartments out;
  out.tree = PseudoGuillotineTree(n);
  auto& t = out.tree;
  std::function<void(int, int)> grow = [&](int leaf, int depth) {
    Rect r = t.node(leaf).region;
    if (depth >= 3 || r.width() < 4 || r.height() < 4 || uni(0, 9) < 3) return;
    if (uni(0, 1) == 0) {
      auto o = uni(0, 1) ? Orientation::Horizontal : Orientation::Vertical;
      Coord lo = o == Orientation::Horizontal ? r.y0 : r.x0, hi = o == Orientation::Horizontal ? r.y1 : r.x1;
      auto [a, b] = t.cut(leaf, o, uni(lo + 1, hi - 1));
      grow(a, depth + 1);
      grow(b, depth + 1);
    } else {
      auto corner = static_cast<Corner>(uni(0, 3));
      auto [l, rest] = t.peel(leaf, corner, uni(1, r.width() / 3), uni(1, r.height() / 3));
      (void)l;
      grow(rest, depth + 1);
    }
  };
  grow(t.root(), 0);

  int next_id = 1;
  std::vector<Item> items;
  auto make = [&](Coord w, Coord h, Coord x, Coord y) {
    Item it{next_id++, w, h, uni(1, 10)};
    items.push_back(it);
    return PlacedItem{it, {x, y, x + w, y + h}};
  };
  for (int leaf : t.leaves()) {
    const auto& nd = t.node(leaf);
    std::vector<PlacedItem> f;
    Rect r = nd.region;
    if (nd.kind == PseudoNode::Kind::L) {
      const LCompartment& l = nd.l;
      Rect b = l.box;
      Coord top_arm = b.y0 + l.arm_h, right_arm = b.x0 + l.arm_v;
      for (Coord y = b.y0; y < top_arm && uni(0, 3) != 0;) {
        Coord h = uni(1, top_arm - y), w = uni(1, b.width());
        Coord x = uni(b.x0, b.x1 - w);
        if (x + w <= right_arm) x = b.x1 - w;
        f.push_back(make(w, h, x, y));
        y += h + uni(0, 1);
      }
      for (Coord x = b.x0; x < right_arm && uni(0, 3) != 0;) {
        Coord w = uni(1, right_arm - x);
        Coord floor_y = b.y0;
        for (const auto& p : f)
          if (p.rect.x0 < x + w && x < p.rect.x1 && p.rect.y1 <= top_arm) floor_y = std::max(floor_y, p.rect.y1);
        Coord y = uni(floor_y, top_arm);
        if (y >= b.y1) break;
        Coord h = uni(std::max<Coord>(1, top_arm + 1 - y), b.y1 - y);
        f.push_back(make(w, h, x, y));
        x += w + uni(0, 1);
      }
      auto mirrors = normalizing_mirrors(l.corner);
      for (Axis a : mirrors) {
        auto m = mirror(f, a, b);
        f = m;
      }
    } else {
      switch (uni(0, 4)) {
        case 0: break;
        case 1: f.push_back(make(uni(1, r.width()), uni(1, r.height()), r.x0, r.y0)); break;
        case 2:
          for (Coord y = r.y0; y < r.y1;) {
            Coord h = uni(1, std::max<Coord>(1, (r.y1 - y) / 2)), w = uni(1, r.width());
            f.push_back(make(w, h, uni(r.x0, r.x1 - w), y));
            y += h + uni(0, 2);
          }
          break;
        case 3:
          for (Coord x = r.x0; x < r.x1;) {
            Coord w = uni(1, std::max<Coord>(1, (r.x1 - x) / 2)), h = uni(1, r.height());
            f.push_back(make(w, h, x, uni(r.y0, r.y1 - h)));
            x += w + uni(0, 2);
          }
          break;
        default: {
          Coord mw = r.width() / 2, mh = r.height() / 2;
          if (mw < 1 || mh < 1) break;
          for (Coord y = r.y0; y + 1 <= r.y1;) {
            Coord row = uni(1, mh);
            if (y + row > r.y1) break;
            for (Coord x = r.x0;;) {
              Coord w = uni(1, mw);
              if (x + w > r.x1) break;
              f.push_back(make(w, uni(1, row), x, y));
              x += w;
            }
            y += row;
          }
        }
      }
    }
    if (!f.empty()) out.fillings[leaf] = std::move(f);
  }
  out.instance = std::make_shared<const Instance>(n, std::move(items));
  return out;
}

// N = 64 with thresholds (1/3, 1/4, 1/16): long > 16, thin <= 4.
inline const ClassThresholds kPlantedT{Rational(1, 3), Rational(1, 4), Rational(1, 16)};

struct Planted {
  std::shared_ptr<const Instance> inst;
  PseudoGuillotineTree tree{64};
  int planted = 0;
};

// Left half: a stack of horizontals. Top right: one large item. Bottom right:
// verticals side by side and a box of small items. Decoys do not fit anywhere
// alongside the planted items.
inline Planted planted_fixture(std::uint64_t seed, bool with_kinds) {
  std::mt19937_64 rng(seed);
  auto uni = [&](Coord lo, Coord hi) { return std::uniform_int_distribution<Coord>(lo, hi)(rng); };
  Planted out;
  auto& t = out.tree;
  auto [left, right] = t.cut(t.root(), Orientation::Vertical, 32);
  auto [bottom, top] = t.cut(right, Orientation::Horizontal, 32);
  auto [vbox, sbox] = t.cut(bottom, Orientation::Vertical, 48);
  if (with_kinds) {
    t.set_box_kind(left, BoxKind::HorizontalStack);
    t.set_box_kind(top, BoxKind::Single);
    t.set_box_kind(vbox, BoxKind::VerticalStack);
    t.set_box_kind(sbox, BoxKind::SmallArea);
  }
  std::vector<Item> items;
  int id = 1;
  Coord y = 0;
  while (true) {
    Coord h = uni(1, 4);
    if (y + h > 64) break;
    items.push_back({id++, uni(17, 32), h, 1});
    y += h;
  }
  items.push_back({id++, uni(17, 32), uni(17, 32), 1});
  Coord x = 0;
  while (true) {
    Coord w = uni(1, 4);
    if (x + w > 16) break;
    items.push_back({id++, w, uni(17, 32), 1});
    x += w;
  }
  // Small items on shelves of height 4 in the 16 x 32 box, only 80% full.
  for (int shelf = 0; shelf < 6; ++shelf)
    for (int k = 0; k < 4; ++k) items.push_back({id++, uni(2, 4), uni(2, 4), 1});
  out.planted = static_cast<int>(items.size());
  // Decoys: horizontals too long, a large item too big for the box.
  items.push_back({id++, 40, 3, 1});
  items.push_back({id++, 33, 33, 1});
  out.inst = std::make_shared<const Instance>(64, items);
  return out;
}

struct ColorFixture {
  ClassThresholds t{Rational(1, 2), Rational(1, 4), Rational(1, 8)};
  std::vector<SkewedTarget> targets;
  std::vector<Item> items;
};

// Four planted skewed items across two stacks (H-stack [0,64]x[0,8], V-stack
// [0,8]x[8,64]; long > 16, thin <= 8) plus two decoys that crowd them out.
inline ColorFixture color_fixture() {
  ColorFixture f;
  f.targets = {{BoxCompartment{{0, 0, 64, 8}, BoxKind::HorizontalStack}, 1},
               {BoxCompartment{{0, 8, 8, 64}, BoxKind::VerticalStack}, 2}};
  f.items = {{1, 50, 4, 1}, {2, 40, 4, 1}, {3, 4, 40, 1}, {4, 4, 50, 1}, {5, 60, 6, 1}, {6, 6, 30, 1}};
  return f;
}

}  // namespace fixtures
