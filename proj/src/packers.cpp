#include "guillopack/packers.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "guillopack/lpack.hpp"

namespace guillopack {

Coord side_of(const Item& it, Dimension d) { return d == Dimension::Height ? it.height : it.width; }

// ---------------------------------------------------------------------------
// NFDH

NfdhResult nfdh_pack(std::span<const Item> items, const Rect& box) {
  if (!box.nondegenerate()) throw InputError("NFDH box is degenerate");
  for (const auto& it : items)
    if (it.width > box.width() || it.height > box.height())
      throw InputError("item " + std::to_string(it.id) + " exceeds the NFDH box");
  std::vector<Item> order(items.begin(), items.end());
  std::sort(order.begin(), order.end(), [](const Item& a, const Item& b) {
    return a.height != b.height ? a.height > b.height : a.id < b.id;
  });

  struct Shelf {
    Coord y0, height;
    std::vector<PlacedItem> items;
  };
  std::vector<Shelf> shelves;
  NfdhResult out{{}, {}, GuillotineTree(box)};
  Coord x = box.x0;
  std::size_t i = 0;
  for (; i < order.size(); ++i) {
    const Item& it = order[i];
    if (shelves.empty() || x + it.width > box.x1) {
      Coord y = shelves.empty() ? box.y0 : shelves.back().y0 + shelves.back().height;
      if (y + it.height > box.y1) break;
      shelves.push_back({y, it.height, {}});
      x = box.x0;
    }
    Shelf& s = shelves.back();
    s.items.push_back({it, {x, s.y0, x + it.width, s.y0 + it.height}});
    x += it.width;
  }
  out.unplaced.assign(order.begin() + static_cast<std::ptrdiff_t>(i), order.end());

  GuillotineTree& t = out.tree;
  int cur = t.root();
  for (const auto& s : shelves) {
    int shelf = cur;
    Coord top = s.y0 + s.height;
    if (top < box.y1) std::tie(shelf, cur) = t.split(cur, Orientation::Horizontal, top);
    for (const auto& p : s.items) {
      int slot = shelf;
      if (p.rect.x1 < box.x1) std::tie(slot, shelf) = t.split(shelf, Orientation::Vertical, p.rect.x1);
      if (p.rect.y1 < top) slot = t.split(slot, Orientation::Horizontal, p.rect.y1).first;
      t.assign_item(slot, p.item.id);
      out.placed.push_back(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stack knapsack

StackChoice stack_knapsack(std::span<const Item> items, Coord capacity, Objective obj, Dimension d) {
  if (capacity < 0) throw InputError("stack capacity must be >= 0");
  StackChoice out;
  if (obj == Objective::Cardinality) {
    std::vector<Item> order(items.begin(), items.end());
    std::sort(order.begin(), order.end(), [d](const Item& a, const Item& b) {
      return side_of(a, d) != side_of(b, d) ? side_of(a, d) < side_of(b, d) : a.id < b.id;
    });
    for (const auto& it : order) {
      if (out.used + side_of(it, d) > capacity) break;
      out.used += side_of(it, d);
      out.profit += it.profit;
      out.ids.push_back(it.id);
    }
    std::sort(out.ids.begin(), out.ids.end());
    return out;
  }
  const std::size_t n = items.size();
  const auto cap = static_cast<std::size_t>(capacity);
  if (static_cast<double>(n) * static_cast<double>(cap + 1) > 4e8)
    throw InputError("stack knapsack DP too large");
  std::vector<Profit> best(cap + 1, 0);
  std::vector<std::vector<bool>> take(n, std::vector<bool>(cap + 1, false));
  for (std::size_t i = 0; i < n; ++i) {
    auto s = static_cast<std::size_t>(side_of(items[i], d));
    if (s > cap) continue;
    for (std::size_t c = cap; c + 1 > s; --c)
      if (best[c - s] + items[i].profit > best[c]) {
        best[c] = best[c - s] + items[i].profit;
        take[i][c] = true;
      }
  }
  std::size_t c = cap;
  for (std::size_t i = n; i-- > 0;)
    if (take[i][c]) {
      out.ids.push_back(items[i].id);
      out.profit += items[i].profit;
      out.used += side_of(items[i], d);
      c -= static_cast<std::size_t>(side_of(items[i], d));
    }
  std::sort(out.ids.begin(), out.ids.end());
  return out;
}

// ---------------------------------------------------------------------------
// Matching

LargeMatch match_large(std::span<const Item> items, std::span<const Rect> boxes) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  const std::size_t n = items.size(), m = boxes.size();
  Graph g(n + m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (items[i].width <= boxes[j].width() && items[i].height <= boxes[j].height()) boost::add_edge(i, n + j, g);
  std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(n + m);
  boost::edmonds_maximum_cardinality_matching(g, &mate[0]);
  LargeMatch out;
  for (std::size_t i = 0; i < n; ++i) {
    auto v = mate[i];
    if (v == boost::graph_traits<Graph>::null_vertex()) continue;
    std::size_t j = v - n;
    out.pairs.emplace_back(items[i].id, static_cast<int>(j));
    const Rect& b = boxes[j];
    out.placed.push_back({items[i], {b.x0, b.y0, b.x0 + items[i].width, b.y0 + items[i].height}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// GAP

void GapInstance::validate() const {
  for (Coord c : capacities)
    if (c < 0) throw InputError("GAP capacity must be >= 0");
  for (const auto& it : items) {
    if (it.sizes.size() != capacities.size() || it.profits.size() != capacities.size())
      throw InputError("GAP item " + std::to_string(it.id) + " needs one size and profit per bin");
    for (Coord s : it.sizes)
      if (s < 0) throw InputError("GAP sizes must be >= 0");
  }
}

namespace {

GapResult gap_exact(const GapInstance& g, std::int64_t budget) {
  const std::size_t k = g.capacities.size(), n = g.items.size();
  if (k > 8) throw InputError("exact GAP supports at most 8 bins");
  struct State {
    std::vector<Coord> residual;
    Profit profit;
    int parent;
    int choice;
  };
  std::vector<std::vector<State>> layers(n + 1);
  layers[0].push_back({g.capacities, 0, -1, -1});
  std::int64_t states = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::map<std::vector<Coord>, int> index;
    auto& next = layers[i + 1];
    auto offer = [&](std::vector<Coord> r, Profit p, int parent, int choice) {
      auto [it, fresh] = index.emplace(r, static_cast<int>(next.size()));
      if (fresh) {
        next.push_back({std::move(r), p, parent, choice});
        if (++states > budget) throw BudgetExceeded("exact GAP exceeded its state budget");
      } else if (p > next[it->second].profit) {
        next[it->second].profit = p;
        next[it->second].parent = parent;
        next[it->second].choice = choice;
      }
    };
    for (std::size_t s = 0; s < layers[i].size(); ++s) {
      const State st = layers[i][s];
      offer(st.residual, st.profit, static_cast<int>(s), -1);
      for (std::size_t j = 0; j < k; ++j) {
        if (!g.fits(i, j) || st.residual[j] < g.items[i].sizes[j]) continue;
        auto r = st.residual;
        r[j] -= g.items[i].sizes[j];
        offer(std::move(r), st.profit + g.items[i].profits[j], static_cast<int>(s), static_cast<int>(j));
      }
    }
  }
  GapResult out;
  out.bin_of.assign(n, -1);
  const auto& last = layers[n];
  int at = static_cast<int>(std::max_element(last.begin(), last.end(), [](const State& a, const State& b) {
                              return a.profit < b.profit;
                            }) - last.begin());
  out.profit = last[static_cast<std::size_t>(at)].profit;
  for (std::size_t i = n; i > 0; --i) {
    const State& st = layers[i][static_cast<std::size_t>(at)];
    out.bin_of[i - 1] = st.choice;
    at = st.parent;
  }
  return out;
}

struct GreedyGap {
  const GapInstance& g;
  std::vector<int> bin_of;
  std::vector<Coord> residual;

  explicit GreedyGap(const GapInstance& gi) : g(gi), bin_of(gi.items.size(), -1), residual(gi.capacities) {}

  Profit profit_in(std::size_t j) const {
    Profit p = 0;
    for (std::size_t i = 0; i < bin_of.size(); ++i)
      if (bin_of[i] == static_cast<int>(j)) p += g.items[i].profits[j];
    return p;
  }
  Profit total() const {
    Profit p = 0;
    for (std::size_t i = 0; i < bin_of.size(); ++i)
      if (bin_of[i] >= 0) p += g.items[i].profits[static_cast<std::size_t>(bin_of[i])];
    return p;
  }
  void put(std::size_t i, std::size_t j) {
    bin_of[i] = static_cast<int>(j);
    residual[j] -= g.items[i].sizes[j];
  }
  void take_out(std::size_t i) {
    auto j = static_cast<std::size_t>(bin_of[i]);
    residual[j] += g.items[i].sizes[j];
    bin_of[i] = -1;
  }

  void fill() {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < g.items.size(); ++i)
      for (std::size_t j = 0; j < g.capacities.size(); ++j)
        if (g.fits(i, j) && g.items[i].profits[j] > 0) pairs.emplace_back(i, j);
    // Density p/s descending, by cross multiplication; zero size first.
    std::sort(pairs.begin(), pairs.end(), [&](auto a, auto b) {
      auto pa = static_cast<__int128>(g.items[a.first].profits[a.second]);
      auto sa = static_cast<__int128>(g.items[a.first].sizes[a.second]);
      auto pb = static_cast<__int128>(g.items[b.first].profits[b.second]);
      auto sb = static_cast<__int128>(g.items[b.first].sizes[b.second]);
      if (pa * sb != pb * sa) return pa * sb > pb * sa;
      if (pa != pb) return pa > pb;
      return a < b;
    });
    for (auto [i, j] : pairs)
      if (bin_of[i] < 0 && g.items[i].sizes[j] <= residual[j]) put(i, j);
  }

  // A single unassigned item may beat a whole bin.
  bool patch() {
    bool changed = false;
    for (std::size_t j = 0; j < g.capacities.size(); ++j) {
      Profit here = profit_in(j);
      int best = -1;
      for (std::size_t i = 0; i < g.items.size(); ++i)
        if (bin_of[i] < 0 && g.fits(i, j) && g.items[i].profits[j] > here &&
            (best < 0 || g.items[i].profits[j] > g.items[static_cast<std::size_t>(best)].profits[j]))
          best = static_cast<int>(i);
      if (best < 0) continue;
      for (std::size_t i = 0; i < g.items.size(); ++i)
        if (bin_of[i] == static_cast<int>(j)) take_out(i);
      put(static_cast<std::size_t>(best), j);
      fill();
      changed = true;
    }
    return changed;
  }

  // Evict one item to admit an unassigned one when the evicted item can
  // move elsewhere or the trade gains profit.
  bool swap_once() {
    const std::size_t n = g.items.size(), k = g.capacities.size();
    for (std::size_t u = 0; u < n; ++u) {
      if (bin_of[u] >= 0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (!g.fits(u, j)) continue;
        for (std::size_t a = 0; a < n; ++a) {
          if (bin_of[a] != static_cast<int>(j)) continue;
          if (residual[j] + g.items[a].sizes[j] < g.items[u].sizes[j]) continue;
          Profit gain = g.items[u].profits[j] - g.items[a].profits[j];
          int moved_to = -1;
          for (std::size_t j2 = 0; j2 < k; ++j2) {
            if (j2 == j || !g.fits(a, j2) || residual[j2] < g.items[a].sizes[j2]) continue;
            if (moved_to < 0 || g.items[a].profits[j2] > g.items[a].profits[static_cast<std::size_t>(moved_to)])
              moved_to = static_cast<int>(j2);
          }
          Profit total_gain = gain + (moved_to >= 0 ? g.items[a].profits[static_cast<std::size_t>(moved_to)] : 0);
          if (total_gain <= 0) continue;
          take_out(a);
          put(u, j);
          if (moved_to >= 0) put(a, static_cast<std::size_t>(moved_to));
          fill();
          return true;
        }
      }
    }
    return false;
  }
};

// Fills bin j by an exact 0/1 knapsack over the unassigned items, or by
// density when the table would be too large.
void knapsack_bin(GreedyGap& s, std::size_t j) {
  const GapInstance& g = s.g;
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < g.items.size(); ++i)
    if (s.bin_of[i] < 0 && g.fits(i, j) && g.items[i].profits[j] > 0) cand.push_back(i);
  const auto cap = static_cast<std::size_t>(s.residual[j]);
  if (static_cast<double>(cand.size()) * static_cast<double>(cap + 1) > 2e7) {
    s.fill();
    return;
  }
  std::vector<Profit> best(cap + 1, 0);
  std::vector<std::vector<bool>> take(cand.size(), std::vector<bool>(cap + 1, false));
  for (std::size_t c = 0; c < cand.size(); ++c) {
    auto sz = static_cast<std::size_t>(g.items[cand[c]].sizes[j]);
    for (std::size_t r = cap + 1; r-- > sz;)
      if (best[r - sz] + g.items[cand[c]].profits[j] > best[r]) {
        best[r] = best[r - sz] + g.items[cand[c]].profits[j];
        take[c][r] = true;
      }
  }
  std::size_t r = cap;
  for (std::size_t c = cand.size(); c-- > 0;)
    if (take[c][r]) {
      s.put(cand[c], j);
      r -= static_cast<std::size_t>(g.items[cand[c]].sizes[j]);
    }
}

void improve(GreedyGap& s) {
  s.fill();
  s.patch();
  for (std::size_t round = 0; round < 4 * s.g.items.size() + 4 && s.swap_once(); ++round) {
  }
}

GapResult gap_greedy(const GapInstance& g) {
  const std::size_t k = g.capacities.size();
  GreedyGap first(g);
  improve(first);
  GapResult best{first.bin_of, first.total()};
  // Successive knapsacks over several bin orders.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<std::size_t>> orders;
  if (k <= 4) {
    do orders.push_back(order);
    while (std::next_permutation(order.begin(), order.end()));
  } else {
    orders.push_back(order);
    std::reverse(order.begin(), order.end());
    orders.push_back(order);
  }
  for (const auto& o : orders) {
    GreedyGap s(g);
    for (std::size_t j : o) knapsack_bin(s, j);
    improve(s);
    if (s.total() > best.profit) best = {s.bin_of, s.total()};
  }
  return best;
}

}  // namespace

GapResult gap_solve(const GapInstance& g, GapMode mode, std::int64_t budget) {
  g.validate();
  return mode == GapMode::Exact ? gap_exact(g, effective_budget(budget)) : gap_greedy(g);
}

// ---------------------------------------------------------------------------
// Small items

bool eps_small_for(const Item& it, const Rect& box, const Rational& eps) {
  return Rational(it.width) <= eps * box.width() && Rational(it.height) <= eps * box.height();
}

SmallAssignment assign_small(std::span<const Rect> boxes, std::span<const Item> items, const Rational& eps,
                             Objective obj, GapMode mode, std::int64_t budget) {
  if (!(eps > 0 && eps < 1)) throw InputError("eps must lie in (0,1)");
  GapInstance g;
  for (const auto& b : boxes) g.capacities.push_back(b.area());
  for (const auto& it : items) {
    GapItem gi{it.id, {}, {}};
    for (std::size_t j = 0; j < boxes.size(); ++j) {
      gi.sizes.push_back(eps_small_for(it, boxes[j], eps) ? it.width * it.height : g.infinity(j));
      gi.profits.push_back(obj == Objective::Cardinality ? 1 : it.profit);
    }
    g.items.push_back(std::move(gi));
  }
  SmallAssignment out;
  out.gap = gap_solve(g, mode, budget);
  const Rational keep = 1 - 2 * eps - eps * eps;
  for (std::size_t j = 0; j < boxes.size(); ++j) {
    std::vector<Item> mine;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (out.gap.bin_of[i] == static_cast<int>(j)) mine.push_back(items[i]);
    auto weight = [obj](const Item& it) -> Profit { return obj == Objective::Cardinality ? 1 : it.profit; };
    std::sort(mine.begin(), mine.end(), [&](const Item& a, const Item& b) {
      auto l = static_cast<__int128>(weight(a)) * (b.width * b.height);
      auto r = static_cast<__int128>(weight(b)) * (a.width * a.height);
      return l != r ? l > r : a.id < b.id;
    });
    std::vector<Item> chosen;
    Coord area = 0;
    const Rational limit = keep * boxes[j].area();
    for (const auto& it : mine) {
      chosen.push_back(it);
      area += it.width * it.height;
      if (Rational(area) > limit) break;
    }
    if (chosen.empty()) {
      out.per_box.emplace_back();
      out.trees.emplace_back(boxes[j]);
      continue;
    }
    auto packed = nfdh_pack(chosen, boxes[j]);
    out.per_box.push_back(std::move(packed.placed));
    out.trees.push_back(std::move(packed.tree));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Grouping

std::vector<SizeGroup> group_by_size(std::span<const Item> items, Dimension d, const Rational& eps, Coord n) {
  if (!(eps > 0)) throw InputError("eps must be > 0");
  std::vector<Rational> powers{Rational(1)};
  while (powers.back() <= n) powers.push_back(powers.back() * (1 + eps));
  // powers[l] <= N for l < powers.size() - 1
  std::map<int, SizeGroup> groups;
  for (const auto& it : items) {
    Coord s = side_of(it, d);
    if (s < 1 || s > n) throw InputError("item " + std::to_string(it.id) + " does not fit the knapsack");
    auto up = std::upper_bound(powers.begin(), powers.end(), Rational(s));
    int level = static_cast<int>(up - powers.begin()) - 1;
    auto& grp = groups[level];
    if (grp.items.empty()) {
      grp.level = level;
      grp.lower = powers[static_cast<std::size_t>(level)];
      grp.upper = powers[static_cast<std::size_t>(level) + 1];
      grp.rounded = static_cast<Coord>(ceil_of(grp.upper)) - 1;
    }
    grp.items.push_back(it);
    grp.max_size = std::max(grp.max_size, s);
  }
  std::vector<SizeGroup> out;
  for (auto& [l, grp] : groups) out.push_back(std::move(grp));
  return out;
}

HeightGroups build_height_groups(std::span<const Item> items, const Rational& eps, Coord n,
                                 const ClassThresholds& t) {
  std::vector<Item> hor, ver;
  for (const auto& it : items) {
    auto c = classify(it, t, n).cls;
    if (c == ItemClass::Horizontal) hor.push_back(it);
    else if (c == ItemClass::Vertical) ver.push_back(it);
    else throw InputError("item " + std::to_string(it.id) + " is " + to_string(c) + ", not skewed");
  }
  return {group_by_size(hor, Dimension::Height, eps, n), group_by_size(ver, Dimension::Width, eps, n)};
}

LinearGroups linear_group(std::span<const Item> group, const Rational& eps, Dimension d) {
  if (!(eps > 0 && eps <= 1) || numerator(eps) != 1) throw InputError("linear grouping needs 1/eps to be an integer");
  const auto k = static_cast<std::size_t>(denominator(eps));
  std::vector<Item> order(group.begin(), group.end());
  std::sort(order.begin(), order.end(), [d](const Item& a, const Item& b) {
    return side_of(a, d) != side_of(b, d) ? side_of(a, d) > side_of(b, d) : a.id < b.id;
  });
  LinearGroups out;
  out.block_size = (order.size() + k) / (k + 1);
  out.blocks.assign(k + 1, {});
  out.rounded.assign(k + 1, 0);
  std::size_t at = 0;
  for (std::size_t b = 0; b <= k; ++b) {
    std::size_t take = b < k ? std::min(out.block_size, order.size() - at) : order.size() - at;
    for (std::size_t i = 0; i < take; ++i) out.blocks[b].push_back(order[at + i]);
    at += take;
    if (!out.blocks[b].empty()) out.rounded[b] = side_of(out.blocks[b].front(), d);
  }
  out.dropped = out.blocks[0];
  return out;
}

// ---------------------------------------------------------------------------
// Rounded placement

namespace {

std::vector<std::pair<Item, Item>> expand(std::span<const RoundedRequest> requests, bool horizontal) {
  std::vector<std::pair<Item, Item>> out;  // (slot shape carrying the original id, original)
  for (const auto& r : requests) {
    if (r.horizontal != horizontal || r.count == 0) continue;
    if (r.count < 0 || static_cast<std::size_t>(r.count) > r.originals.size())
      throw InputError("requested more rounded items than the group holds");
    for (int i = 0; i < r.count; ++i) {
      const Item& o = r.originals[static_cast<std::size_t>(i)];
      if (o.width > r.shape.width || o.height > r.shape.height)
        throw InputError("item " + std::to_string(o.id) + " is larger than its rounded shape");
      out.push_back({Item{o.id, r.shape.width, r.shape.height, o.profit}, o});
    }
  }
  return out;
}

}  // namespace

std::vector<PlacedItem> place_rounded_in_compartment(const Compartment& c, std::span<const RoundedRequest> requests) {
  auto hs = expand(requests, true);
  auto vs = expand(requests, false);
  std::map<int, Item> original;
  for (const auto& [s, o] : hs) original[o.id] = o;
  for (const auto& [s, o] : vs) original[o.id] = o;
  std::vector<PlacedItem> out;

  if (const auto* box = std::get_if<BoxCompartment>(&c)) {
    if (!hs.empty() && !vs.empty()) throw InputError("a box holds one orientation only");
    const Rect& r = box->rect;
    bool horizontal = !hs.empty();
    auto& list = horizontal ? hs : vs;
    std::stable_sort(list.begin(), list.end(), [horizontal](const auto& a, const auto& b) {
      return horizontal ? a.first.width > b.first.width : a.first.height > b.first.height;
    });
    Coord at = horizontal ? r.y0 : r.x0;
    for (const auto& [s, o] : list) {
      if (s.width > r.width() || s.height > r.height()) throw InputError("rounded item exceeds the box");
      Rect slot = horizontal ? Rect{r.x0, at, r.x0 + s.width, at + s.height}
                             : Rect{at, r.y0, at + s.width, r.y0 + s.height};
      if (!r.contains(slot)) throw InputError("requested counts exceed the box");
      out.push_back({o, {slot.x0, slot.y0, slot.x0 + o.width, slot.y0 + o.height}});
      at += horizontal ? s.height : s.width;
    }
    return out;
  }

  const auto& l = std::get<LCompartment>(c);
  l.validate();
  std::vector<Item> hshapes, vshapes;
  for (const auto& [s, o] : hs) hshapes.push_back(s);
  for (const auto& [s, o] : vs) vshapes.push_back(s);
  auto slots = place_in_lshape(hshapes, vshapes, LShape{l.box, l.arm_v, l.arm_h});
  if (!slots) throw InputError("requested counts exceed the L-compartment");
  std::set<int> horizontal_ids;
  for (const auto& [s, o] : hs) horizontal_ids.insert(o.id);
  for (const auto& slot : *slots) {
    const Item& o = original.at(slot.item.id);
    // Horizontal originals sit flush right, vertical ones flush top, as the slots do.
    Rect r = horizontal_ids.count(o.id)
                 ? Rect{slot.rect.x1 - o.width, slot.rect.y0, slot.rect.x1, slot.rect.y0 + o.height}
                 : Rect{slot.rect.x0, slot.rect.y1 - o.height, slot.rect.x0 + o.width, slot.rect.y1};
    out.push_back({o, r});
  }
  for (Axis a : normalizing_mirrors(l.corner)) out = mirror(out, a, l.box);
  return out;
}

}  // namespace guillopack
