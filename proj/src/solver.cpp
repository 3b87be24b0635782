#include "guillopack/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "guillopack/lpack.hpp"

namespace guillopack {

Flavor parse_flavor(const std::string& s) {
  if (s == "free") return {Flavor::Kind::Free, 0};
  if (s == "guillotine") return {Flavor::Kind::Guillotine, 0};
  if (s.rfind("stages:", 0) == 0) {
    try {
      std::size_t used = 0;
      int k = std::stoi(s.substr(7), &used);
      if (used == s.size() - 7 && k >= 0) return {Flavor::Kind::Stages, k};
    } catch (const std::exception&) {
    }
  }
  throw InputError("flavor must be free, guillotine or stages:k, got '" + s + "'");
}

std::string to_string(const Flavor& f) {
  switch (f.kind) {
    case Flavor::Kind::Free: return "free";
    case Flavor::Kind::Guillotine: return "guillotine";
    case Flavor::Kind::Stages: return "stages:" + std::to_string(f.stages);
  }
  return "free";
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

struct PlacementSearch {
  Coord n = 0;
  bool rotation = false;
  bool guillotine = false;
  std::int64_t budget = 0;
  std::int64_t expansions = 0;
  bool exhausted = false;

  std::vector<Item> items;
  std::vector<Coord> xs, ys;
  std::vector<PlacedItem> placed;

  static std::vector<Coord> sums(const std::vector<Coord>& sides, Coord n) {
    std::vector<bool> reach(static_cast<std::size_t>(n) + 1, false);
    reach[0] = true;
    for (Coord s : sides)
      for (Coord v = n; v >= s; --v)
        if (reach[static_cast<std::size_t>(v - s)]) reach[static_cast<std::size_t>(v)] = true;
    std::vector<Coord> out;
    for (Coord v = 0; v <= n; ++v)
      if (reach[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
  }

  bool place(std::size_t i) {
    if (i == items.size()) {
      if (!guillotine) return true;
      return is_separable(check_guillotine(placed, Rect{0, 0, n, n}));
    }
    const Item& it = items[i];
    for (int rot = 0; rot < (rotation && it.width != it.height ? 2 : 1); ++rot) {
      Coord w = rot ? it.height : it.width, h = rot ? it.width : it.height;
      for (Coord x : xs) {
        if (x + w > n) break;
        for (Coord y : ys) {
          if (y + h > n) break;
          if (++expansions > budget) {
            exhausted = true;
            return false;
          }
          Rect r{x, y, x + w, y + h};
          bool clash = false;
          for (const auto& p : placed)
            if (overlaps(p.rect, r)) {
              clash = true;
              break;
            }
          if (clash) continue;
          placed.push_back({it, r});
          if (place(i + 1)) return true;
          placed.pop_back();
          if (exhausted) return false;
        }
      }
    }
    return false;
  }
};

}  // namespace

OracleResult oracle_exact(const std::shared_ptr<const Instance>& inst, const Flavor& flavor, std::int64_t budget) {
  budget = effective_budget(budget);
  OracleResult out;
  out.flavor = flavor;
  out.packing = Packing(inst);
  if (flavor.kind == Flavor::Kind::Stages) {
    auto r = stage_bounded_best(inst, flavor.stages, budget);
    out.packing = r.packing;
    out.value = r.value;
    out.complete = r.complete;
    out.expansions = r.expansions;
    return out;
  }
  const Coord n = inst->side();
  const bool rot = inst->allow_rotation();
  std::vector<Item> cand;
  for (const auto& it : inst->items())
    if ((it.width <= n && it.height <= n) || (rot && it.height <= n && it.width <= n)) cand.push_back(it);
  if (cand.size() > 20) throw InputError("oracle_exact handles at most 20 items");

  // Incumbent: NFDH is a 2-stage guillotine packing, so it is valid for every flavor.
  auto nf = nfdh_pack(cand, Rect{0, 0, n, n});
  out.packing = Packing::from_placed(inst, nf.placed);
  out.value = profit(nf.placed);

  const std::size_t m = cand.size();
  std::vector<std::pair<Profit, std::uint32_t>> subsets;
  subsets.reserve(std::size_t{1} << m);
  for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
    Profit p = 0;
    Coord area = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1U) p += cand[i].profit, area += cand[i].width * cand[i].height;
    if (p > out.value && area <= n * n) subsets.emplace_back(p, mask);
  }
  std::sort(subsets.begin(), subsets.end(), [](auto a, auto b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });

  for (auto [p, mask] : subsets) {
    if (p <= out.value) break;
    PlacementSearch s;
    s.n = n;
    s.rotation = rot;
    s.guillotine = flavor.kind == Flavor::Kind::Guillotine;
    s.budget = budget - out.expansions;
    std::vector<Coord> ws, hs;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1U) {
        s.items.push_back(cand[i]);
        ws.push_back(cand[i].width);
        hs.push_back(cand[i].height);
        if (rot) ws.push_back(cand[i].height), hs.push_back(cand[i].width);
      }
    std::sort(s.items.begin(), s.items.end(), [](const Item& a, const Item& b) {
      return a.width * a.height != b.width * b.height ? a.width * a.height > b.width * b.height : a.id < b.id;
    });
    s.xs = PlacementSearch::sums(ws, n);
    s.ys = PlacementSearch::sums(hs, n);
    bool ok = s.place(0);
    out.expansions += s.expansions;
    if (s.exhausted) {
      out.complete = false;
      break;
    }
    if (ok) {
      out.packing = Packing::from_placed(inst, s.placed);
      out.value = p;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config

std::string to_string(SkewedMode m) {
  switch (m) {
    case SkewedMode::Auto: return "auto";
    case SkewedMode::Few: return "few";
    case SkewedMode::Many: return "many";
  }
  return "auto";
}

SkewedMode parse_skewed_mode(const std::string& s) {
  for (SkewedMode m : {SkewedMode::Auto, SkewedMode::Few, SkewedMode::Many})
    if (to_string(m) == s) return m;
  throw InputError("mode must be auto, few or many, got '" + s + "'");
}

void SolverConfig::validate() const {
  if (!(eps > 0 && eps < 1)) throw InputError("eps must lie in (0,1)");
  if (thresholds) thresholds->validate();
  if (regime_c < 1) throw InputError("regime constant must be >= 1");
  if (color.colors < 0 || color.repetitions < 0 || color.target < 0) throw InputError("color coding sizes must be >= 0");
  if (!(color.delta > 0 && color.delta < 1)) throw InputError("color coding delta must lie in (0,1)");
  if (enumeration.depth < 0 || enumeration.grid < 0 || enumeration.max_trees < 1)
    throw InputError("bad enumeration settings");
}

// ---------------------------------------------------------------------------
// Targets

namespace {

bool is_horizontal(const Item& it, Coord n, const ClassThresholds& t) {
  return classify(it, t, n).cls == ItemClass::Horizontal;
}

bool accepts_horizontal(const Compartment& c) {
  if (const auto* b = std::get_if<BoxCompartment>(&c)) return b->kind == BoxKind::HorizontalStack;
  return true;
}
bool accepts_vertical(const Compartment& c) {
  if (const auto* b = std::get_if<BoxCompartment>(&c)) return b->kind == BoxKind::VerticalStack;
  return true;
}

std::vector<PlacedItem> stack_in_box(const Rect& r, std::span<const Item> items, bool horizontal) {
  std::vector<Item> fit;
  for (const auto& it : items)
    if (it.width <= r.width() && it.height <= r.height()) fit.push_back(it);
  auto choice = stack_knapsack(fit, horizontal ? r.height() : r.width(), Objective::Cardinality,
                               horizontal ? Dimension::Height : Dimension::Width);
  std::vector<PlacedItem> out;
  Coord at = horizontal ? r.y0 : r.x0;
  for (const auto& it : fit) {
    if (!std::binary_search(choice.ids.begin(), choice.ids.end(), it.id)) continue;
    if (horizontal) {
      out.push_back({it, {r.x0, at, r.x0 + it.width, at + it.height}});
      at += it.height;
    } else {
      out.push_back({it, {at, r.y0, at + it.width, r.y0 + it.height}});
      at += it.width;
    }
  }
  return out;
}

}  // namespace

std::vector<PlacedItem> solve_target(const SkewedTarget& target, std::span<const Item> items, Coord n,
                                     const ClassThresholds& t) {
  std::vector<Item> hs, vs;
  for (const auto& it : items) {
    auto c = classify(it, t, n).cls;
    if (c == ItemClass::Horizontal) hs.push_back(it);
    else if (c == ItemClass::Vertical) vs.push_back(it);
  }
  if (const auto* b = std::get_if<BoxCompartment>(&target.compartment)) {
    if (b->kind == BoxKind::HorizontalStack) return stack_in_box(b->rect, hs, true);
    if (b->kind == BoxKind::VerticalStack) return stack_in_box(b->rect, vs, false);
    return {};
  }
  const auto& l = std::get<LCompartment>(target.compartment);
  LShape shape{l.box, l.arm_v, l.arm_h};
  std::vector<Item> hfit, vfit;
  for (const auto& it : hs)
    if (it.width <= l.box.width() && it.height <= l.arm_h) hfit.push_back(it);
  for (const auto& it : vs)
    if (it.height <= l.box.height() && it.width <= l.arm_v) vfit.push_back(it);
  if (hfit.empty() && vfit.empty()) return {};
  auto sol = solve_l_cardinality(hfit, vfit, shape);
  auto out = sol.placement;
  for (Axis a : normalizing_mirrors(l.corner)) out = mirror(out, a, l.box);
  return out;
}

// ---------------------------------------------------------------------------
// Few items: color coding

SkewedAssignment best_for_coloring(std::span<const Item> skewed, std::span<const SkewedTarget> targets, Coord n,
                                   const ClassThresholds& t, std::span<const int> color, int colors) {
  if (colors < 1 || colors > 16) throw InputError("color count must lie in [1,16]");
  if (color.size() != skewed.size()) throw InputError("one color per skewed item");
  const std::size_t m = targets.size();
  const std::uint32_t full = (1U << colors) - 1;
  SkewedAssignment out;
  out.per_target.assign(m, {});
  if (m == 0 || skewed.empty()) return out;

  auto items_of = [&](std::uint32_t s) {
    std::vector<Item> v;
    for (std::size_t i = 0; i < skewed.size(); ++i)
      if (s >> color[i] & 1U) v.push_back(skewed[i]);
    return v;
  };
  // val[j][S]: best count in target j using colors S, computed on the
  // colors that have at least one item able to enter target j.
  std::vector<std::vector<int>> val(m, std::vector<int>(full + 1, 0));
  for (std::size_t j = 0; j < m; ++j) {
    std::uint32_t useful = 0;
    for (std::size_t i = 0; i < skewed.size(); ++i) {
      auto c = classify(skewed[i], t, n).cls;
      bool ok = c == ItemClass::Horizontal ? accepts_horizontal(targets[j].compartment)
                                           : c == ItemClass::Vertical && accepts_vertical(targets[j].compartment);
      if (ok) useful |= 1U << color[i];
    }
    std::vector<int> memo(full + 1, -1);
    for (std::uint32_t s = 0; s <= full; ++s) {
      std::uint32_t key = s & useful;
      if (memo[key] < 0) memo[key] = static_cast<int>(solve_target(targets[j], items_of(key), n, t).size());
      val[j][s] = memo[key];
    }
  }
  // best[j][S]: first j targets, colors S.
  std::vector<std::vector<int>> best(m + 1, std::vector<int>(full + 1, 0));
  std::vector<std::vector<std::uint32_t>> pick(m + 1, std::vector<std::uint32_t>(full + 1, 0));
  for (std::size_t j = 1; j <= m; ++j)
    for (std::uint32_t s = 0; s <= full; ++s) {
      int b = -1;
      std::uint32_t arg = 0;
      for (std::uint32_t sub = s;; sub = (sub - 1) & s) {
        int v = best[j - 1][s & ~sub] + val[j - 1][sub];
        if (v > b) b = v, arg = sub;
        if (sub == 0) break;
      }
      best[j][s] = b;
      pick[j][s] = arg;
    }
  std::uint32_t s = full;
  for (std::size_t j = m; j >= 1; --j) {
    std::uint32_t sub = pick[j][s];
    out.per_target[j - 1] = solve_target(targets[j - 1], items_of(sub), n, t);
    out.count += static_cast<int>(out.per_target[j - 1].size());
    s &= ~sub;
  }
  out.colorings = 1;
  return out;
}

SkewedAssignment few_items_path(std::span<const Item> skewed, std::span<const SkewedTarget> targets, Coord n,
                                const ClassThresholds& t, const ColorCoding& cc) {
  SkewedAssignment best;
  best.per_target.assign(targets.size(), {});
  if (skewed.empty() || targets.empty()) return best;
  int colors = std::max(1, cc.colors);
  int target = cc.target > 0 ? std::min(cc.target, colors) : colors;
  int reps = cc.repetitions > 0
                 ? cc.repetitions
                 : static_cast<int>(std::ceil(std::exp(static_cast<double>(target)) * std::log(1.0 / cc.delta)));
  std::mt19937_64 rng(cc.seed);
  std::uniform_int_distribution<int> pick(0, colors - 1);
  std::vector<int> color(skewed.size());
  for (int r = 0; r < reps; ++r) {
    for (auto& c : color) c = pick(rng);
    auto a = best_for_coloring(skewed, targets, n, t, color, colors);
    if (a.count > best.count) {
      a.colorings = best.colorings;
      best = std::move(a);
    }
    ++best.colorings;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Many items: grouping and greedy counts

namespace {

struct RoundedClass {
  Item shape;
  std::vector<Item> members;
  bool horizontal = true;
};

SkewedAssignment assign_classes(std::vector<RoundedClass> classes, std::span<const SkewedTarget> targets) {
  std::sort(classes.begin(), classes.end(), [](const RoundedClass& a, const RoundedClass& b) {
    Coord ta = a.horizontal ? a.shape.height : a.shape.width, tb = b.horizontal ? b.shape.height : b.shape.width;
    Coord la = a.horizontal ? a.shape.width : a.shape.height, lb = b.horizontal ? b.shape.width : b.shape.height;
    if (ta != tb) return ta < tb;
    if (la != lb) return la < lb;
    return a.members.front().id < b.members.front().id;
  });
  // Boxes before L-compartments.
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::holds_alternative<BoxCompartment>(targets[a].compartment) &&
           !std::holds_alternative<BoxCompartment>(targets[b].compartment);
  });
  std::vector<std::vector<RoundedRequest>> reqs(targets.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const auto& cls = classes[c];
    std::vector<int> slot(targets.size(), -1);
    for (const auto& member : cls.members) {
      bool placed = false;
      for (std::size_t j : order) {
        const auto& comp = targets[j].compartment;
        if (cls.horizontal ? !accepts_horizontal(comp) : !accepts_vertical(comp)) continue;
        auto trial = reqs[j];
        if (slot[j] < 0) trial.push_back({cls.shape, {}, 0, cls.horizontal});
        auto& rq = slot[j] < 0 ? trial.back() : trial[static_cast<std::size_t>(slot[j])];
        rq.originals.push_back(member);
        ++rq.count;
        try {
          place_rounded_in_compartment(comp, trial);
        } catch (const InputError&) {
          continue;
        }
        if (slot[j] < 0) slot[j] = static_cast<int>(trial.size()) - 1;
        reqs[j] = std::move(trial);
        placed = true;
        break;
      }
      if (!placed) break;
    }
  }
  SkewedAssignment out;
  out.per_target.assign(targets.size(), {});
  for (std::size_t j = 0; j < targets.size(); ++j) {
    out.per_target[j] = place_rounded_in_compartment(targets[j].compartment, reqs[j]);
    out.count += static_cast<int>(out.per_target[j].size());
  }
  return out;
}

}  // namespace

SkewedAssignment many_items_path(std::span<const Item> skewed, std::span<const SkewedTarget> targets, Coord n,
                                 const ClassThresholds& t, const Rational& eps) {
  SkewedAssignment best;
  best.per_target.assign(targets.size(), {});
  if (skewed.empty() || targets.empty()) return best;
  const auto k = static_cast<std::size_t>(ceil_of(1 / eps));
  const Rational eps_k(1, static_cast<long>(k));
  auto groups = build_height_groups(skewed, eps, n, t);

  auto run = [&](const std::vector<RoundedClass>& classes) {
    auto a = assign_classes(classes, targets);
    if (a.count > best.count) best = std::move(a);
  };
  // Lattice of prefix fractions r/k of every group, smallest members first.
  for (std::size_t r = 1; r <= k; ++r) {
    std::vector<RoundedClass> classes;
    auto add = [&](const std::vector<SizeGroup>& gs, bool horizontal) {
      Dimension along = horizontal ? Dimension::Width : Dimension::Height;
      for (const auto& g : gs) {
        auto members = g.items;
        std::sort(members.begin(), members.end(), [along](const Item& a, const Item& b) {
          return side_of(a, along) != side_of(b, along) ? side_of(a, along) < side_of(b, along) : a.id < b.id;
        });
        members.resize((members.size() * r + k - 1) / k);
        auto lg = linear_group(members, eps_k, along);
        for (std::size_t b = 1; b < lg.blocks.size(); ++b) {
          if (lg.blocks[b].empty()) continue;
          Item shape{0, horizontal ? lg.rounded[b] : g.max_size, horizontal ? g.max_size : lg.rounded[b], 1};
          classes.push_back({shape, lg.blocks[b], horizontal});
        }
      }
    };
    add(groups.horizontal, true);
    add(groups.vertical, false);
    if (!classes.empty()) run(classes);
  }
  // Finest lattice point: every item is its own class, nothing dropped.
  std::vector<RoundedClass> fine;
  for (const auto& it : skewed) fine.push_back({it, {it}, is_horizontal(it, n, t)});
  run(fine);
  return best;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

struct Pools {
  std::vector<Item> large, small, skewed;
  int intermediate = 0;
};

Pools split_pools(const Instance& inst, const ClassThresholds& t) {
  Pools p;
  for (const auto& it : inst.items()) {
    switch (classify(it, t, inst.side()).cls) {
      case ItemClass::Large: p.large.push_back(it); break;
      case ItemClass::Small: p.small.push_back(it); break;
      case ItemClass::Horizontal:
      case ItemClass::Vertical: p.skewed.push_back(it); break;
      case ItemClass::Intermediate: ++p.intermediate; break;
    }
  }
  return p;
}

struct Filled {
  std::map<int, std::vector<PlacedItem>> fillings;
  int count = 0;
  SolveStats stats;
};

Filled fill_with_roles(const Instance& inst, const PseudoGuillotineTree& tree, const Pools& pools,
                       const ClassThresholds& t, const SolverConfig& cfg, bool quick) {
  Filled out;
  const Coord n = inst.side();
  std::vector<Rect> single, small;
  std::vector<int> single_leaf, small_leaf;
  std::vector<SkewedTarget> targets;
  for (int leaf : tree.leaves()) {
    const auto& nd = tree.node(leaf);
    if (nd.kind == PseudoNode::Kind::L) {
      targets.push_back({nd.l, leaf});
      continue;
    }
    switch (nd.box_kind) {
      case BoxKind::Single: single.push_back(nd.region), single_leaf.push_back(leaf); break;
      case BoxKind::SmallArea: small.push_back(nd.region), small_leaf.push_back(leaf); break;
      case BoxKind::HorizontalStack:
      case BoxKind::VerticalStack: targets.push_back({BoxCompartment{nd.region, nd.box_kind}, leaf}); break;
      case BoxKind::Any: break;
    }
  }
  if (!single.empty() && !pools.large.empty()) {
    auto m = match_large(pools.large, single);
    for (std::size_t i = 0; i < m.pairs.size(); ++i)
      out.fillings[single_leaf[static_cast<std::size_t>(m.pairs[i].second)]].push_back(m.placed[i]);
  }
  if (!small.empty() && !pools.small.empty()) {
    SmallAssignment a;
    GapMode mode = quick ? GapMode::GreedyEps : cfg.gap_mode;
    try {
      a = assign_small(small, pools.small, cfg.eps, Objective::Cardinality, mode, cfg.budget);
    } catch (const BudgetExceeded&) {
      out.stats.gap_fell_back = true;
      a = assign_small(small, pools.small, cfg.eps, Objective::Cardinality, GapMode::GreedyEps);
    }
    for (std::size_t j = 0; j < small.size(); ++j)
      if (!a.per_box[j].empty()) out.fillings[small_leaf[j]] = a.per_box[j];
  }
  out.stats.skewed_path = "none";
  if (!targets.empty() && !pools.skewed.empty()) {
    auto many = many_items_path(pools.skewed, targets, n, t, cfg.eps);
    SkewedAssignment chosen = many;
    out.stats.skewed_path = "many";
    double threshold = cfg.regime_c * std::log2(static_cast<double>(inst.size()) * static_cast<double>(n));
    out.stats.regime_threshold = threshold;
    bool few = cfg.mode == SkewedMode::Few || (cfg.mode == SkewedMode::Auto && many.count <= threshold);
    if (few && !quick) {
      ColorCoding cc = cfg.color;
      if (cc.colors == 0) cc.colors = std::clamp(static_cast<int>(std::ceil(threshold)), 1, 8);
      if (cc.target == 0) cc.target = std::min(cc.colors, many.count + 1);
      if (cc.repetitions == 0)
        cc.repetitions = std::min(
            2000, static_cast<int>(std::ceil(std::exp(static_cast<double>(cc.target)) * std::log(1.0 / cc.delta))));
      auto f = few_items_path(pools.skewed, targets, n, t, cc);
      out.stats.colors = cc.colors;
      out.stats.repetitions = cc.repetitions;
      out.stats.skewed_path = "few";
      if (f.count >= many.count) chosen = std::move(f);
    }
    for (std::size_t j = 0; j < targets.size(); ++j)
      if (!chosen.per_target[j].empty()) out.fillings[targets[j].leaf] = chosen.per_target[j];
  }
  for (const auto& [leaf, v] : out.fillings) out.count += static_cast<int>(v.size());
  out.stats.large = static_cast<int>(pools.large.size());
  out.stats.small = static_cast<int>(pools.small.size());
  out.stats.skewed = static_cast<int>(pools.skewed.size());
  out.stats.intermediate = pools.intermediate;
  return out;
}

// Role of a box of kind Any, judged on the box alone.
BoxKind local_role(const Rect& r, const Pools& pools, const ClassThresholds& t, const SolverConfig& cfg, Coord n) {
  int best = 0;
  BoxKind role = BoxKind::HorizontalStack;
  for (const auto& it : pools.large)
    if (it.width <= r.width() && it.height <= r.height()) {
      best = 1;
      role = BoxKind::Single;
      break;
    }
  std::vector<Item> eligible;
  for (const auto& it : pools.small)
    if (eps_small_for(it, r, cfg.eps)) eligible.push_back(it);
  if (!eligible.empty()) {
    int c = static_cast<int>(nfdh_pack(eligible, r).placed.size());
    if (c > best) best = c, role = BoxKind::SmallArea;
  }
  for (bool h : {true, false}) {
    SkewedTarget tg{BoxCompartment{r, h ? BoxKind::HorizontalStack : BoxKind::VerticalStack}, 0};
    int c = static_cast<int>(solve_target(tg, pools.skewed, n, t).size());
    if (c > best) best = c, role = h ? BoxKind::HorizontalStack : BoxKind::VerticalStack;
  }
  return role;
}

PseudoGuillotineTree resolve_roles(const Instance& inst, const PseudoGuillotineTree& tree, const Pools& pools,
                                   const ClassThresholds& t, const SolverConfig& cfg) {
  std::vector<int> open;
  for (int leaf : tree.leaves())
    if (tree.node(leaf).kind == PseudoNode::Kind::Box && tree.node(leaf).box_kind == BoxKind::Any) open.push_back(leaf);
  if (open.empty()) return tree;
  const BoxKind roles[] = {BoxKind::Single, BoxKind::SmallArea, BoxKind::HorizontalStack, BoxKind::VerticalStack};
  PseudoGuillotineTree best = tree;
  if (open.size() <= 3) {
    int best_count = -1;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < open.size(); ++i) combos *= 4;
    for (std::size_t code = 0; code < combos; ++code) {
      PseudoGuillotineTree trial = tree;
      std::size_t c = code;
      for (int leaf : open) {
        trial.set_box_kind(leaf, roles[c % 4]);
        c /= 4;
      }
      int count = fill_with_roles(inst, trial, pools, t, cfg, true).count;
      if (count > best_count) best_count = count, best = trial;
    }
    return best;
  }
  // Too many for the full product: start from local roles, then change one
  // box at a time while the quick count improves.
  for (int leaf : open) best.set_box_kind(leaf, local_role(tree.node(leaf).region, pools, t, cfg, inst.side()));
  int best_count = fill_with_roles(inst, best, pools, t, cfg, true).count;
  for (int pass = 0; pass < 4; ++pass) {
    bool improved = false;
    for (int leaf : open)
      for (BoxKind role : roles) {
        if (best.node(leaf).box_kind == role) continue;
        PseudoGuillotineTree trial = best;
        trial.set_box_kind(leaf, role);
        int count = fill_with_roles(inst, trial, pools, t, cfg, true).count;
        if (count > best_count) best_count = count, best = trial, improved = true;
      }
    if (!improved) break;
  }
  return best;
}

ClassThresholds thresholds_for(const Instance& inst, const SolverConfig& cfg) {
  if (cfg.thresholds) return *cfg.thresholds;
  return choose_thresholds(inst, cfg.eps).chosen;
}

SolveResult finish(const std::shared_ptr<const Instance>& inst, const PseudoGuillotineTree& tree, Filled filled,
                   const ClassThresholds& t, const SolverConfig& cfg) {
  NiceContext ctx{cfg.eps, t, inst->side()};
  auto comp = compose_pseudo(tree, filled.fillings, inst, ctx);
  if (!is_separable(check_guillotine(comp.packing)))
    throw std::logic_error("composed packing is not guillotine separable");
  SolveResult out;
  out.packing = std::move(comp.packing);
  out.tree = std::move(comp.tree);
  out.compartments = tree;
  out.fillings = std::move(filled.fillings);
  out.stats = filled.stats;
  return out;
}

}  // namespace

SolveResult solve_cardinality(const std::shared_ptr<const Instance>& inst, const PseudoGuillotineTree& compartments,
                              const SolverConfig& cfg) {
  cfg.validate();
  if (compartments.side() != inst->side()) throw InputError("compartments and instance disagree on N");
  if (auto problems = compartments.problems(); !problems.empty()) throw InputError(problems.front());
  ClassThresholds t = thresholds_for(*inst, cfg);
  t.validate();
  Pools pools = split_pools(*inst, t);
  PseudoGuillotineTree tree = resolve_roles(*inst, compartments, pools, t, cfg);
  return finish(inst, tree, fill_with_roles(*inst, tree, pools, t, cfg, false), t, cfg);
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

struct ShapeGen {
  Coord n;
  Coord grid;
  std::vector<Coord> arms;
  std::mt19937_64 rng{12345};

  std::vector<Coord> positions(Coord lo, Coord hi) const {
    std::vector<Coord> out;
    for (Coord p = (lo / grid + 1) * grid; p < hi; p += grid) out.push_back(p);
    return out;
  }

  // A random tree of depth <= d grown from `leaf`.
  void grow(PseudoGuillotineTree& t, int leaf, int d) {
    Rect r = t.node(leaf).region;
    std::uniform_int_distribution<int> coin(0, 9);
    int c = coin(rng);
    if (d == 0 || c < 3) return;
    if (c < 8) {
      auto o = c % 2 ? Orientation::Horizontal : Orientation::Vertical;
      auto ps = o == Orientation::Horizontal ? positions(r.y0, r.y1) : positions(r.x0, r.x1);
      if (ps.empty()) return;
      Coord p = ps[std::uniform_int_distribution<std::size_t>(0, ps.size() - 1)(rng)];
      auto [a, b] = t.cut(leaf, o, p);
      grow(t, a, d - 1);
      grow(t, b, d - 1);
      return;
    }
    if (arms.empty()) return;
    Coord av = arms[std::uniform_int_distribution<std::size_t>(0, arms.size() - 1)(rng)];
    Coord ah = arms[std::uniform_int_distribution<std::size_t>(0, arms.size() - 1)(rng)];
    if (av >= r.width() || ah >= r.height()) return;
    auto corner = static_cast<Corner>(std::uniform_int_distribution<int>(0, 3)(rng));
    auto [l, rest] = t.peel(leaf, corner, av, ah);
    (void)l;
    grow(t, rest, d - 1);
  }
};

}  // namespace

std::vector<PseudoGuillotineTree> enumerate_compartments(Coord n, const ClassThresholds& t,
                                                         const EnumerationConfig& cfg, bool* truncated) {
  ShapeGen gen{n, cfg.grid > 0 ? cfg.grid : std::max<Coord>(1, n / 8), {}};
  Coord arm_max = static_cast<Coord>(ceil_of(t.eps_large * n / 2)) - 1;
  if (arm_max >= 1) {
    gen.arms.push_back(arm_max);
    if (arm_max / 2 >= 1 && arm_max / 2 != arm_max) gen.arms.push_back(arm_max / 2);
  }
  std::vector<PseudoGuillotineTree> out;
  std::set<std::string> seen;
  auto offer = [&](const PseudoGuillotineTree& tr) {
    if (static_cast<int>(out.size()) >= cfg.max_trees) return false;
    if (seen.insert(pseudo_tree_to_json(tr).dump()).second) out.push_back(tr);
    return true;
  };
  bool full = true;
  // Depth 0 and 1 exhaustively.
  offer(PseudoGuillotineTree(n));
  if (cfg.depth >= 1) {
    for (auto o : {Orientation::Vertical, Orientation::Horizontal})
      for (Coord p : gen.positions(0, n)) {
        PseudoGuillotineTree tr(n);
        tr.cut(tr.root(), o, p);
        full &= offer(tr);
      }
    for (int c = 0; c < 4; ++c)
      for (Coord av : gen.arms)
        for (Coord ah : gen.arms) {
          PseudoGuillotineTree tr(n);
          tr.peel(tr.root(), static_cast<Corner>(c), av, ah);
          full &= offer(tr);
        }
  }
  // Deeper trees by seeded sampling.
  if (cfg.depth >= 2) {
    int misses = 0;
    while (static_cast<int>(out.size()) < cfg.max_trees && misses < 20 * cfg.max_trees) {
      PseudoGuillotineTree tr(n);
      gen.grow(tr, tr.root(), cfg.depth);
      std::size_t before = out.size();
      offer(tr);
      misses += out.size() == before;
    }
    full = false;  // sampled, never exhaustive
  }
  if (truncated) *truncated = !full;
  return out;
}

SolveResult solve_enumerated(const std::shared_ptr<const Instance>& inst, const SolverConfig& cfg) {
  cfg.validate();
  ClassThresholds t = thresholds_for(*inst, cfg);
  Pools pools = split_pools(*inst, t);
  bool truncated = false;
  auto trees = enumerate_compartments(inst->side(), t, cfg.enumeration, &truncated);
  // Quick pass on every tree, full pass on the three best.
  std::vector<std::pair<int, std::size_t>> scored;
  std::vector<PseudoGuillotineTree> resolved;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    resolved.push_back(resolve_roles(*inst, trees[i], pools, t, cfg));
    scored.emplace_back(fill_with_roles(*inst, resolved.back(), pools, t, cfg, true).count, i);
  }
  std::stable_sort(scored.begin(), scored.end(), [](auto a, auto b) { return a.first > b.first; });
  std::optional<SolveResult> best;
  for (std::size_t r = 0; r < std::min<std::size_t>(3, scored.size()); ++r) {
    const auto& tree = resolved[scored[r].second];
    auto res = finish(inst, tree, fill_with_roles(*inst, tree, pools, t, cfg, false), t, cfg);
    if (!best || res.packing.size() > best->packing.size() ||
        (res.packing.size() == best->packing.size() && profit(res.packing) > profit(best->packing)))
      best = std::move(res);
  }
  best->stats.trees_evaluated = static_cast<int>(trees.size());
  best->stats.enumeration_truncated = truncated;
  return *best;
}

// ---------------------------------------------------------------------------

ProfitSplit split_by_profit_threshold(std::span<const Item> items, int c, Coord n, const Rational& eps) {
  if (c < 1) throw InputError("threshold constant must be >= 1");
  ProfitSplit out;
  if (items.empty()) return out;
  Profit max_p = 0;
  for (const auto& it : items) max_p = std::max(max_p, it.profit);
  const auto count = static_cast<Coord>(items.size());
  std::vector<Item> kept;
  for (const auto& it : items)
    (Rational(it.profit) * 2 * count < eps * max_p ? out.dropped : kept).push_back(it);
  std::sort(kept.begin(), kept.end(),
            [](const Item& a, const Item& b) { return a.profit != b.profit ? a.profit > b.profit : a.id < b.id; });
  const double level = c * std::log2(static_cast<double>(count) * static_cast<double>(n));
  Profit prefix = 0;
  for (const auto& it : kept) {
    prefix += it.profit;
    if (static_cast<double>(prefix) >= level * static_cast<double>(it.profit)) {
      out.pivot = it.id;
      break;
    }
  }
  if (!out.pivot) {
    out.high = kept;
    return out;
  }
  Profit pivot_p = 0;
  for (const auto& it : kept)
    if (it.id == *out.pivot) pivot_p = it.profit;
  for (const auto& it : kept) (it.profit > pivot_p ? out.high : out.low).push_back(it);
  return out;
}

}  // namespace guillopack
