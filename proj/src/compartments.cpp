#include "guillopack/compartments.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace guillopack {

std::string to_string(BoxKind k) {
  switch (k) {
    case BoxKind::Any: return "any";
    case BoxKind::Single: return "single";
    case BoxKind::HorizontalStack: return "horizontal-stack";
    case BoxKind::VerticalStack: return "vertical-stack";
    case BoxKind::SmallArea: return "small-area";
  }
  return "any";
}

BoxKind parse_box_kind(const std::string& s) {
  for (BoxKind k : {BoxKind::Any, BoxKind::Single, BoxKind::HorizontalStack, BoxKind::VerticalStack,
                    BoxKind::SmallArea})
    if (to_string(k) == s) return k;
  if (s == "one-large") return BoxKind::Single;
  throw InputError("unknown box kind '" + s + "'");
}

std::string to_string(Corner c) {
  switch (c) {
    case Corner::BottomLeft: return "bottom-left";
    case Corner::BottomRight: return "bottom-right";
    case Corner::TopLeft: return "top-left";
    case Corner::TopRight: return "top-right";
  }
  return "bottom-left";
}

Corner parse_corner(const std::string& s) {
  for (Corner c : {Corner::BottomLeft, Corner::BottomRight, Corner::TopLeft, Corner::TopRight})
    if (to_string(c) == s) return c;
  throw InputError("unknown corner '" + s + "'");
}

std::vector<Axis> normalizing_mirrors(Corner corner) {
  switch (corner) {
    case Corner::BottomLeft: return {};
    case Corner::BottomRight: return {Axis::Y};
    case Corner::TopLeft: return {Axis::X};
    case Corner::TopRight: return {Axis::X, Axis::Y};
  }
  return {};
}

namespace {

bool left_bend(Corner c) { return c == Corner::BottomLeft || c == Corner::TopLeft; }
bool bottom_bend(Corner c) { return c == Corner::BottomLeft || c == Corner::BottomRight; }

Rect mirror_one(Rect r, Axis axis, const Rect& within) {
  if (axis == Axis::Y) return {within.x0 + within.x1 - r.x1, r.y0, within.x0 + within.x1 - r.x0, r.y1};
  return {r.x0, within.y0 + within.y1 - r.y1, r.x1, within.y0 + within.y1 - r.y0};
}

LCompartment canonical(const LCompartment& l) { return {l.box, l.arm_v, l.arm_h, Corner::BottomLeft}; }

}  // namespace

bool LCompartment::degenerate() const {
  return arm_v == 0 || arm_h == 0 || arm_v >= box.width() || arm_h >= box.height();
}

Rect LCompartment::hole() const {
  Rect h = box;
  if (left_bend(corner)) h.x0 = std::min(box.x1, box.x0 + arm_v);
  else h.x1 = std::max(box.x0, box.x1 - arm_v);
  if (bottom_bend(corner)) h.y0 = std::min(box.y1, box.y0 + arm_h);
  else h.y1 = std::max(box.y0, box.y1 - arm_h);
  return h;
}

bool LCompartment::contains(const Rect& r) const {
  if (!box.contains(r)) return false;
  Rect h = hole();
  return !h.nondegenerate() || !overlaps(r, h);
}

std::vector<std::pair<Coord, Coord>> LCompartment::vertices() const {
  const Rect& b = box;
  std::vector<std::pair<Coord, Coord>> v{{b.x0, b.y0},          {b.x1, b.y0},          {b.x1, b.y0 + arm_h},
                                         {b.x0 + arm_v, b.y0 + arm_h}, {b.x0 + arm_v, b.y1}, {b.x0, b.y1}};
  auto mirrors = normalizing_mirrors(corner);
  for (auto& [x, y] : v)
    for (Axis a : mirrors) {
      if (a == Axis::Y) x = b.x0 + b.x1 - x;
      else y = b.y0 + b.y1 - y;
    }
  if (mirrors.size() % 2 == 1) std::reverse(v.begin() + 1, v.end());
  return v;
}

void LCompartment::validate(const std::optional<Rational>& eps_large, Coord n) const {
  if (!box.nondegenerate()) throw InputError("L-compartment box is degenerate");
  if (arm_v < 0 || arm_h < 0 || arm_v > box.width() || arm_h > box.height())
    throw InputError("L-compartment arms do not fit the box");
  if (arm_v == 0 && arm_h == 0) throw InputError("L-compartment has no area");
  if (eps_large && n > 0) {
    Rational limit = *eps_large * n / 2;
    if (!(Rational(arm_v) < limit && Rational(arm_h) < limit))
      throw InputError("L-compartment arm is not thinner than eps_large * N / 2");
  }
}

LCompartment l_from_vertices(const std::vector<std::pair<Coord, Coord>>& vertices) {
  if (vertices.size() != 6) throw InputError("an L-compartment has six vertices");
  Coord x0 = vertices[0].first, x1 = x0, y0 = vertices[0].second, y1 = y0;
  for (auto [x, y] : vertices) {
    x0 = std::min(x0, x), x1 = std::max(x1, x);
    y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  std::optional<std::pair<Coord, Coord>> inner;
  std::set<std::pair<Coord, Coord>> given(vertices.begin(), vertices.end());
  for (auto [x, y] : vertices)
    if (x0 < x && x < x1 && y0 < y && y < y1) {
      if (inner) throw InputError("L-compartment has more than one reflex vertex");
      inner = std::make_pair(x, y);
    }
  if (!inner) throw InputError("vertices do not describe an L");
  std::optional<Corner> missing;
  for (Corner c : {Corner::BottomLeft, Corner::BottomRight, Corner::TopLeft, Corner::TopRight}) {
    std::pair<Coord, Coord> p{left_bend(c) ? x0 : x1, bottom_bend(c) ? y0 : y1};
    if (!given.count(p)) missing = c;
  }
  if (!missing) throw InputError("vertices do not describe an L");
  Corner bend = *missing == Corner::BottomLeft    ? Corner::TopRight
                : *missing == Corner::BottomRight ? Corner::TopLeft
                : *missing == Corner::TopLeft     ? Corner::BottomRight
                                                  : Corner::BottomLeft;
  LCompartment l;
  l.box = {x0, y0, x1, y1};
  l.corner = bend;
  l.arm_v = left_bend(bend) ? inner->first - x0 : x1 - inner->first;
  l.arm_h = bottom_bend(bend) ? inner->second - y0 : y1 - inner->second;
  auto expect = l.vertices();
  if (std::set<std::pair<Coord, Coord>>(expect.begin(), expect.end()) != given)
    throw InputError("vertices do not describe a rectilinear L");
  return l;
}

// ---------------------------------------------------------------------------

namespace {

bool pairwise_disjoint(std::vector<std::pair<Coord, Coord>> spans) {
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i)
    if (spans[i].first < spans[i - 1].second) return false;
  return true;
}

std::optional<ItemClass> class_of(const PlacedItem& p, const NiceContext& ctx) {
  if (!ctx.thresholds || ctx.n <= 0) return std::nullopt;
  return classify(p.item, *ctx.thresholds, ctx.n).cls;
}

}  // namespace

NiceCheck validate_nice_box(const BoxCompartment& b, std::span<const PlacedItem> items, const NiceContext& ctx) {
  for (const auto& p : items)
    if (!b.rect.contains(p.rect)) return {false, b.kind, "item " + std::to_string(p.item.id) + " leaves the box"};
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t j = i + 1; j < items.size(); ++j)
      if (overlaps(items[i].rect, items[j].rect))
        return {false, b.kind, "items " + std::to_string(items[i].item.id) + " and " + std::to_string(items[j].item.id) + " overlap"};
  if (items.size() <= 1) return {true, BoxKind::Single, ""};

  auto all_class = [&](ItemClass c) {
    for (const auto& p : items) {
      auto k = class_of(p, ctx);
      if (k && *k != c) return false;
    }
    return true;
  };
  auto horizontal = [&] {
    std::vector<std::pair<Coord, Coord>> s;
    for (const auto& p : items) s.emplace_back(p.rect.y0, p.rect.y1);
    return all_class(ItemClass::Horizontal) && pairwise_disjoint(s);
  };
  auto vertical = [&] {
    std::vector<std::pair<Coord, Coord>> s;
    for (const auto& p : items) s.emplace_back(p.rect.x0, p.rect.x1);
    return all_class(ItemClass::Vertical) && pairwise_disjoint(s);
  };
  auto small = [&] {
    if (!all_class(ItemClass::Small)) return false;
    for (const auto& p : items)
      if (Rational(p.rect.width()) > ctx.eps * b.rect.width() || Rational(p.rect.height()) > ctx.eps * b.rect.height())
        return false;
    return is_separable(check_guillotine(items, b.rect));
  };
  switch (b.kind) {
    case BoxKind::Single: return {false, b.kind, "more than one item in a single-item box"};
    case BoxKind::HorizontalStack:
      return horizontal() ? NiceCheck{true, b.kind, ""} : NiceCheck{false, b.kind, "items are not a horizontal stack"};
    case BoxKind::VerticalStack:
      return vertical() ? NiceCheck{true, b.kind, ""} : NiceCheck{false, b.kind, "items are not side by side"};
    case BoxKind::SmallArea:
      return small() ? NiceCheck{true, b.kind, ""} : NiceCheck{false, b.kind, "items are not eps-small for the box"};
    case BoxKind::Any:
      if (horizontal()) return {true, BoxKind::HorizontalStack, ""};
      if (vertical()) return {true, BoxKind::VerticalStack, ""};
      if (small()) return {true, BoxKind::SmallArea, ""};
      return {false, b.kind, "no nice discipline applies"};
  }
  return {false, b.kind, "unknown kind"};
}

namespace {

// In the canonical frame: an item reaching above the horizontal arm is
// vertical, one reaching right of the vertical arm is horizontal.
bool sits_horizontal(const Rect& r, const LCompartment& canon) {
  if (r.y1 > canon.box.y0 + canon.arm_h) return false;
  if (r.x1 > canon.box.x0 + canon.arm_v) return true;
  return r.width() > r.height();
}

std::vector<PlacedItem> to_canonical(std::span<const PlacedItem> items, const LCompartment& l) {
  std::vector<PlacedItem> v(items.begin(), items.end());
  for (Axis a : normalizing_mirrors(l.corner))
    for (auto& p : v) p.rect = mirror_one(p.rect, a, l.box);
  return v;
}

}  // namespace

NiceCheck validate_nice_l(const LCompartment& l, std::span<const PlacedItem> items, const NiceContext& ctx) {
  try {
    l.validate(ctx.thresholds ? std::optional<Rational>(ctx.thresholds->eps_large) : std::nullopt, ctx.n);
  } catch (const InputError& e) {
    return {false, BoxKind::Any, e.what()};
  }
  for (const auto& p : items)
    if (!l.contains(p.rect)) return {false, BoxKind::Any, "item " + std::to_string(p.item.id) + " leaves the L"};
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t j = i + 1; j < items.size(); ++j)
      if (overlaps(items[i].rect, items[j].rect)) return {false, BoxKind::Any, "items overlap"};
  LCompartment canon = canonical(l);
  auto v = to_canonical(items, l);
  std::vector<std::pair<Coord, Coord>> ys, xs;
  for (const auto& p : v) {
    auto k = class_of(p, ctx);
    if (k && *k != ItemClass::Horizontal && *k != ItemClass::Vertical)
      return {false, BoxKind::Any, "item " + std::to_string(p.item.id) + " is " + to_string(*k) + ", not skewed"};
    bool horizontal = k ? *k == ItemClass::Horizontal : sits_horizontal(p.rect, canon);
    // Mirroring swaps nothing between axes, so the class stays meaningful.
    (horizontal ? ys : xs).emplace_back(horizontal ? p.rect.y0 : p.rect.x0, horizontal ? p.rect.y1 : p.rect.x1);
  }
  if (!pairwise_disjoint(ys)) return {false, BoxKind::Any, "horizontal items are not stacked"};
  if (!pairwise_disjoint(xs)) return {false, BoxKind::Any, "vertical items are not side by side"};
  return {true, BoxKind::Any, ""};
}

// ---------------------------------------------------------------------------

namespace {

GuillotineTree separate_or_throw(std::span<const PlacedItem> items, const Rect& region, const char* what) {
  auto r = check_guillotine(items, region);
  if (!is_separable(r)) throw InputError(std::string(what) + ": items are not guillotine separable");
  return std::get<GuillotineTree>(std::move(r));
}

void collect_cuts(const GuillotineTree& t, int node, std::vector<Cut>& out) {
  const auto& n = t.node(node);
  if (n.is_leaf()) return;
  out.push_back({n.region, *n.cut, n.position});
  collect_cuts(t, n.low, out);
  collect_cuts(t, n.high, out);
}

bool crosses(const PlacedItem& p, Orientation o, Coord c) {
  return o == Orientation::Horizontal ? (p.rect.y0 < c && c < p.rect.y1) : (p.rect.x0 < c && c < p.rect.x1);
}

// Peeling in the canonical frame.
LCutSequence peel_canonical(const LCompartment& l, std::vector<PlacedItem> items) {
  LCutSequence out{{}, GuillotineTree(l.box), -1};
  GuillotineTree& t = out.tree;
  if (l.arm_v >= l.box.width() || l.arm_h >= l.box.height()) {
    t = separate_or_throw(items, l.box, "L-compartment");
    collect_cuts(t, t.root(), out.cuts);
    return out;
  }
  int cur = t.root();
  auto cut_here = [&](Orientation o, Coord c) {
    for (const auto& p : items)
      if (crosses(p, o, c)) throw InputError("L placement is not nice: a peeling cut hits item " + std::to_string(p.item.id));
    auto [lo, hi] = t.split(cur, o, c);
    std::vector<PlacedItem> low, rest;
    for (auto& p : items)
      ((o == Orientation::Horizontal ? p.rect.y1 : p.rect.x1) <= c ? low : rest).push_back(p);
    if (!low.empty()) t.graft(lo, separate_or_throw(low, t.node(lo).region, "L-compartment"));
    items = std::move(rest);
    cur = hi;
  };
  while (!items.empty()) {
    std::vector<const PlacedItem*> hs, vs;
    for (const auto& p : items) (sits_horizontal(p.rect, l) ? hs : vs).push_back(&p);
    auto lowest = [](const std::vector<const PlacedItem*>& v) {
      return *std::min_element(v.begin(), v.end(), [](auto a, auto b) { return a->rect.y0 < b->rect.y0; });
    };
    auto leftmost = [](const std::vector<const PlacedItem*>& v) {
      return *std::min_element(v.begin(), v.end(), [](auto a, auto b) { return a->rect.x0 < b->rect.x0; });
    };
    if (vs.empty()) {
      cut_here(Orientation::Horizontal, lowest(hs)->rect.y1);
      continue;
    }
    Coord r = leftmost(vs)->rect.x1;
    if (hs.empty()) {
      cut_here(Orientation::Vertical, r);
      continue;
    }
    Coord top = -1;
    for (const auto* h : hs)
      if (h->rect.x0 < r && r < h->rect.x1) top = std::max(top, h->rect.y1);
    if (top < 0) cut_here(Orientation::Vertical, r);
    else cut_here(Orientation::Horizontal, top);
  }
  Rect hole = canonical(l).hole();
  if (t.node(cur).region.x0 < hole.x0) cut_here(Orientation::Vertical, hole.x0);
  if (t.node(cur).region.y0 < hole.y0) cut_here(Orientation::Horizontal, hole.y0);
  out.hole_leaf = cur;
  collect_cuts(t, t.root(), out.cuts);
  return out;
}

}  // namespace

LCutSequence nice_l_cut_sequence(const LCompartment& l, std::span<const PlacedItem> items) {
  l.validate();
  for (const auto& p : items)
    if (!l.contains(p.rect)) throw InputError("item " + std::to_string(p.item.id) + " leaves the L");
  LCompartment canon = canonical(l);
  LCutSequence seq = peel_canonical(canon, to_canonical(items, l));
  auto mirrors = normalizing_mirrors(l.corner);
  if (mirrors.empty()) return seq;
  // Undo the normalization in reverse order.
  GuillotineTree t = seq.tree;
  for (auto it = mirrors.rbegin(); it != mirrors.rend(); ++it) t = mirror(t, *it, l.box);
  LCutSequence out{{}, t, -1};
  collect_cuts(out.tree, out.tree.root(), out.cuts);
  if (seq.hole_leaf >= 0) {
    Rect hole = l.hole();
    for (int leaf : out.tree.leaves())
      if (out.tree.node(leaf).region == hole && !out.tree.node(leaf).item_id) out.hole_leaf = leaf;
  }
  return out;
}

// ---------------------------------------------------------------------------

PseudoGuillotineTree::PseudoGuillotineTree(Coord n) : n_(n) {
  if (n < 1) throw InputError("knapsack side must be >= 1");
  PseudoNode root;
  root.region = {0, 0, n, n};
  nodes_.push_back(root);
}

std::pair<int, int> PseudoGuillotineTree::cut(int leaf, Orientation o, Coord position) {
  PseudoNode& nd = nodes_.at(static_cast<std::size_t>(leaf));
  if (nd.kind != PseudoNode::Kind::Box) throw InputError("cut: node is not a box leaf");
  Rect r = nd.region, lo = r, hi = r;
  if (o == Orientation::Horizontal) {
    if (position <= r.y0 || position >= r.y1) throw InputError("cut outside the rectangle");
    lo.y1 = hi.y0 = position;
  } else {
    if (position <= r.x0 || position >= r.x1) throw InputError("cut outside the rectangle");
    lo.x1 = hi.x0 = position;
  }
  nd.kind = PseudoNode::Kind::Cut;
  nd.orientation = o;
  nd.position = position;
  int a = static_cast<int>(nodes_.size());
  nd.low = a;
  nd.high = a + 1;
  PseudoNode x, y;
  x.region = lo;
  y.region = hi;
  nodes_.push_back(x);
  nodes_.push_back(y);
  return {a, a + 1};
}

std::pair<int, int> PseudoGuillotineTree::peel(int leaf, Corner corner, Coord arm_v, Coord arm_h) {
  PseudoNode& nd = nodes_.at(static_cast<std::size_t>(leaf));
  if (nd.kind != PseudoNode::Kind::Box) throw InputError("peel: node is not a box leaf");
  LCompartment l{nd.region, arm_v, arm_h, corner};
  l.validate();
  if (arm_v >= nd.region.width() || arm_h >= nd.region.height())
    throw InputError("peel: the remaining rectangle would be empty");
  nd.kind = PseudoNode::Kind::Peel;
  int a = static_cast<int>(nodes_.size());
  nd.low = a;
  nd.high = a + 1;
  PseudoNode x, y;
  x.kind = PseudoNode::Kind::L;
  x.region = nd.region;
  x.l = l;
  y.region = l.hole();
  nodes_.push_back(x);
  nodes_.push_back(y);
  return {a, a + 1};
}

void PseudoGuillotineTree::set_box_kind(int leaf, BoxKind kind) {
  PseudoNode& nd = nodes_.at(static_cast<std::size_t>(leaf));
  if (nd.kind != PseudoNode::Kind::Box) throw InputError("set_box_kind: node is not a box leaf");
  nd.box_kind = kind;
}

std::vector<int> PseudoGuillotineTree::leaves() const {
  std::vector<int> out;
  std::function<void(int)> walk = [&](int i) {
    const auto& nd = node(i);
    if (nd.kind == PseudoNode::Kind::Box || nd.kind == PseudoNode::Kind::L) {
      out.push_back(i);
      return;
    }
    walk(nd.low);
    walk(nd.high);
  };
  walk(root());
  return out;
}

std::vector<std::string> PseudoGuillotineTree::problems(const std::optional<Rational>& eps_large) const {
  std::vector<std::string> out;
  if (!(node(0).region == Rect{0, 0, n_, n_})) out.push_back("root is not the knapsack");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& nd = nodes_[i];
    if (nd.kind == PseudoNode::Kind::L) {
      try {
        nd.l.validate(eps_large, n_);
      } catch (const InputError& e) {
        out.push_back("node " + std::to_string(i) + ": " + e.what());
      }
    }
    if (nd.kind == PseudoNode::Kind::Cut || nd.kind == PseudoNode::Kind::Peel) {
      const auto& a = node(nd.low);
      const auto& b = node(nd.high);
      Coord area_a = a.kind == PseudoNode::Kind::L ? a.region.area() - a.l.hole().area() : a.region.area();
      if (area_a + b.region.area() != nd.region.area() || !nd.region.contains(b.region))
        out.push_back("node " + std::to_string(i) + ": children do not partition the rectangle");
    }
  }
  return out;
}

std::vector<Compartment> compartments(const PseudoGuillotineTree& t) {
  std::vector<Compartment> out;
  for (int leaf : t.leaves()) {
    const auto& nd = t.node(leaf);
    if (nd.kind == PseudoNode::Kind::L) out.emplace_back(nd.l);
    else out.emplace_back(BoxCompartment{nd.region, nd.box_kind});
  }
  return out;
}

Json pseudo_tree_to_json(const PseudoGuillotineTree& t) {
  std::function<Json(int)> dump = [&](int i) {
    const auto& nd = t.node(i);
    Json j{{"region", rect_to_json(nd.region)}};
    switch (nd.kind) {
      case PseudoNode::Kind::Box:
        j["kind"] = "box";
        j["box_kind"] = to_string(nd.box_kind);
        break;
      case PseudoNode::Kind::L:
        j["kind"] = "l";
        j["corner"] = to_string(nd.l.corner);
        j["arm_v"] = nd.l.arm_v;
        j["arm_h"] = nd.l.arm_h;
        break;
      case PseudoNode::Kind::Cut:
        j["kind"] = "cut";
        j["cut"] = {{"orientation", nd.orientation == Orientation::Horizontal ? "horizontal" : "vertical"},
                    {"position", nd.position}};
        j["children"] = Json::array({dump(nd.low), dump(nd.high)});
        break;
      case PseudoNode::Kind::Peel:
        j["kind"] = "peel";
        j["children"] = Json::array({dump(nd.low), dump(nd.high)});
        break;
    }
    return j;
  };
  return {{"N", t.side()}, {"root", dump(t.root())}};
}

PseudoGuillotineTree pseudo_tree_from_json(const Json& j) {
  try {
    PseudoGuillotineTree t(j.at("N").get<Coord>());
    std::function<void(const Json&, int)> load = [&](const Json& nd, int idx) {
      std::string kind = nd.at("kind").get<std::string>();
      if (kind == "box") {
        if (nd.contains("box_kind")) t.set_box_kind(idx, parse_box_kind(nd.at("box_kind").get<std::string>()));
      } else if (kind == "cut") {
        const Json& c = nd.at("cut");
        std::string o = c.at("orientation").get<std::string>();
        if (o != "horizontal" && o != "vertical") throw InputError("bad cut orientation '" + o + "'");
        auto [lo, hi] = t.cut(idx, o == "horizontal" ? Orientation::Horizontal : Orientation::Vertical,
                              c.at("position").get<Coord>());
        load(nd.at("children").at(0), lo);
        load(nd.at("children").at(1), hi);
      } else if (kind == "peel") {
        const Json& lj = nd.at("children").at(0);
        auto [l, rest] = t.peel(idx, parse_corner(lj.at("corner").get<std::string>()), lj.at("arm_v").get<Coord>(),
                                lj.at("arm_h").get<Coord>());
        (void)l;
        load(nd.at("children").at(1), rest);
      } else {
        throw InputError("unexpected node kind '" + kind + "'");
      }
    };
    load(j.at("root"), t.root());
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed pseudo tree: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

Composition compose_pseudo(const PseudoGuillotineTree& t, const std::map<int, std::vector<PlacedItem>>& fillings,
                           std::shared_ptr<const Instance> inst, const NiceContext& ctx) {
  if (inst->side() != t.side()) throw InputError("instance and pseudo tree disagree on N");
  auto leaves = t.leaves();
  for (const auto& [leaf, items] : fillings) {
    if (!std::binary_search(leaves.begin(), leaves.end(), leaf) &&
        std::find(leaves.begin(), leaves.end(), leaf) == leaves.end())
      throw InputError("filling for node " + std::to_string(leaf) + ", which is not a leaf");
    const auto& nd = t.node(leaf);
    NiceCheck c = nd.kind == PseudoNode::Kind::L ? validate_nice_l(nd.l, items, ctx)
                                                 : validate_nice_box({nd.region, nd.box_kind}, items, ctx);
    if (!c.ok) throw InputError("leaf " + std::to_string(leaf) + ": " + c.reason);
  }
  static const std::vector<PlacedItem> kEmpty;
  auto items_of = [&](int leaf) -> const std::vector<PlacedItem>& {
    auto it = fillings.find(leaf);
    return it == fillings.end() ? kEmpty : it->second;
  };

  GuillotineTree g(Rect{0, 0, t.side(), t.side()});
  std::function<void(int, int)> build = [&](int pn, int gn) {
    const auto& nd = t.node(pn);
    switch (nd.kind) {
      case PseudoNode::Kind::Cut: {
        auto [lo, hi] = g.split(gn, nd.orientation, nd.position);
        build(nd.low, lo);
        build(nd.high, hi);
        return;
      }
      case PseudoNode::Kind::Box: {
        const auto& items = items_of(pn);
        if (!items.empty()) g.graft(gn, separate_or_throw(items, nd.region, "box"));
        return;
      }
      case PseudoNode::Kind::Peel: {
        const auto& lnode = t.node(nd.low);
        LCutSequence seq = nice_l_cut_sequence(lnode.l, items_of(nd.low));
        auto mapping = g.graft(gn, seq.tree);
        build(nd.high, mapping.at(static_cast<std::size_t>(seq.hole_leaf)));
        return;
      }
      case PseudoNode::Kind::L:
        throw std::logic_error("L leaf reached outside a peel");
    }
  };
  build(t.root(), g.root());

  std::vector<PlacedItem> all;
  for (const auto& [leaf, items] : fillings) all.insert(all.end(), items.begin(), items.end());
  Packing p = Packing::from_placed(std::move(inst), all);
  if (!validate_packing(p).empty()) throw InputError("fillings do not form a valid packing");
  if (auto problems = verify_tree(g, all); !problems.empty())
    throw std::logic_error("composed tree is invalid: " + problems.front());
  return {std::move(p), std::move(g)};
}

// ---------------------------------------------------------------------------

BoundaryL extract_boundary_l(const Packing& p, const GuillotineTree& t, const Rational& eps_large) {
  const Coord n = p.instance().side();
  auto placed = p.placed();
  if (!(t.node(t.root()).region == Rect{0, 0, n, n})) throw InputError("tree root must be the knapsack");
  if (auto problems = verify_tree(t, placed); !problems.empty())
    throw InputError("tree does not certify the packing: " + problems.front());
  if (!(eps_large > 0 && eps_large <= 1)) throw InputError("eps_large must lie in (0,1]");
  const Rational limit = eps_large * n / 4;

  std::map<int, std::pair<Coord, Coord>> shift;  // item id -> (dx, dy)
  auto move_subtree = [&](int node, Coord dx, Coord dy) {
    std::function<void(int)> walk = [&](int i) {
      const auto& nd = t.node(i);
      if (nd.is_leaf()) {
        if (nd.item_id) shift[*nd.item_id] = {dx, dy};
        return;
      }
      walk(nd.low);
      walk(nd.high);
    };
    walk(node);
  };

  BoundaryL out;
  out.tree = GuillotineTree(Rect{0, 0, n, n});
  int cur = out.tree.root();
  int node = t.root();
  Coord tx = 0, ty = 0;
  while (!t.node(node).is_leaf()) {
    const auto& nd = t.node(node);
    Coord c = nd.position;
    Coord near_low = c, near_high = n - c;
    bool hug_low = Rational(near_low) < limit, hug_high = Rational(near_high) < limit;
    if (!hug_low && !hug_high) break;
    bool slab_is_low = hug_low && (!hug_high || near_low <= near_high);
    int slab = slab_is_low ? nd.low : nd.high;
    int cont = slab_is_low ? nd.high : nd.low;
    Rect sr = t.node(slab).region;
    Coord dx = tx - sr.x0, dy = ty - sr.y0;
    Rect target{sr.x0 + dx, sr.y0 + dy, sr.x1 + dx, sr.y1 + dy};
    std::pair<int, int> parts;
    if (*nd.cut == Orientation::Vertical) {
      parts = out.tree.split(cur, Orientation::Vertical, tx + sr.width());
      tx += sr.width();
    } else {
      parts = out.tree.split(cur, Orientation::Horizontal, ty + sr.height());
      ty += sr.height();
    }
    out.tree.graft(parts.first, translated(subtree(t, slab), dx, dy));
    move_subtree(slab, dx, dy);
    out.slabs.push_back(target);
    cur = parts.second;
    node = cont;
    ++out.hugging_cuts;
  }
  Rect rest = t.node(node).region;
  Coord dx = tx - rest.x0, dy = ty - rest.y0;
  out.tree.graft(cur, translated(subtree(t, node), dx, dy));
  move_subtree(node, dx, dy);
  out.rest = {tx, ty, n, n};
  out.region = {n, ty, tx};

  std::vector<PlacedItem> moved;
  for (auto pi : placed) {
    auto [ddx, ddy] = shift.at(pi.item.id);
    pi.rect = {pi.rect.x0 + ddx, pi.rect.y0 + ddy, pi.rect.x1 + ddx, pi.rect.y1 + ddy};
    moved.push_back(pi);
  }
  out.packing = Packing::from_placed(p.instance_ptr(), moved);
  if (auto problems = verify_tree(out.tree, moved); !problems.empty())
    throw std::logic_error("boundary L rearrangement broke the tree: " + problems.front());
  return out;
}

Json fillings_to_json(const PseudoGuillotineTree& t, const std::map<int, std::vector<PlacedItem>>& fillings) {
  auto leaves = t.leaves();
  Json out = Json::object();
  for (const auto& [leaf, items] : fillings) {
    auto at = std::find(leaves.begin(), leaves.end(), leaf);
    if (at == leaves.end()) throw InputError("filling for non-leaf node " + std::to_string(leaf));
    Json arr = Json::array();
    for (const auto& pi : items) arr.push_back({{"id", pi.item.id}, {"x", pi.rect.x0}, {"y", pi.rect.y0}});
    out[std::to_string(at - leaves.begin())] = arr;
  }
  return out;
}

std::map<int, std::vector<PlacedItem>> fillings_from_json(const Json& j, const PseudoGuillotineTree& t,
                                                          const Instance& inst) {
  if (!j.is_object()) throw InputError("fillings must be an object keyed by leaf ordinal");
  auto leaves = t.leaves();
  std::map<int, std::vector<PlacedItem>> out;
  for (const auto& [key, arr] : j.items()) {
    std::size_t ord = 0;
    try {
      std::size_t used = 0;
      ord = std::stoul(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw InputError("bad leaf ordinal '" + key + "'");
    }
    if (ord >= leaves.size()) throw InputError("leaf ordinal " + key + " out of range");
    if (!arr.is_array()) throw InputError("filling " + key + " must be an array");
    auto& dst = out[leaves[ord]];
    for (const auto& e : arr) {
      if (!e.is_object() || !e.contains("id") || !e.contains("x") || !e.contains("y"))
        throw InputError("filling entries need id, x and y");
      const Item& it = inst.item(e.at("id").get<int>());
      Coord x = e.at("x").get<Coord>(), y = e.at("y").get<Coord>();
      dst.push_back({it, {x, y, x + it.width, y + it.height}});
    }
  }
  return out;
}

}  // namespace guillopack
