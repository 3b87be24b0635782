#include <algorithm>
#include <random>

#include "doctest.h"
#include "guillopack/core.hpp"
#include "guillopack/generators.hpp"
#include "guillopack/io.hpp"
#include "guillopack/rational.hpp"

using namespace guillopack;

TEST_CASE("overlaps treats rectangles as open sets") {
  Rect a{0, 0, 2, 2};
  CHECK_FALSE(overlaps(a, Rect{2, 0, 4, 2}));
  CHECK(overlaps(a, Rect{1, 1, 3, 3}));
  CHECK(overlaps(a, a));
  CHECK_FALSE(overlaps(a, Rect{0, 2, 2, 4}));
}

TEST_CASE("overlaps is symmetric on random rects") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(0, 6);
  for (int t = 0; t < 500; ++t) {
    Coord x = d(rng), y = d(rng), u = d(rng), v = d(rng);
    Rect a{x, y, x + 1 + d(rng), y + 1 + d(rng)};
    Rect b{u, v, u + 1 + d(rng), v + 1 + d(rng)};
    CHECK(overlaps(a, b) == overlaps(b, a));
    CHECK(overlaps(a, a));
  }
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(Instance(0, {}), InputError);
  CHECK_THROWS_AS(Instance(4, {{1, 5, 1, 1}}), InputError);
  CHECK_THROWS_AS(Instance(4, {{1, 1, 1, -1}}), InputError);
  CHECK_THROWS_AS(Instance(4, {{1, 1, 1, 1}, {1, 2, 2, 1}}), InputError);
  CHECK_THROWS_AS(Instance(4, {{1, 0, 1, 1}}), InputError);
  Instance ok(4, {{3, 4, 1, 2}});
  CHECK(ok.item(3).profit == 2);
  CHECK_THROWS_AS(ok.item(9), InputError);
}

TEST_CASE("validate_packing") {
  auto inst = std::make_shared<const Instance>(4, std::vector<Item>{{1, 1, 1, 7}, {2, 1, 1, 1}});
  CHECK(validate_packing(Packing(inst)).empty());
  CHECK(profit(Packing(inst)) == 0);

  Packing same(inst, {{1, 2, 2, false}, {2, 2, 2, false}});
  auto v = validate_packing(same);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::Overlap);
  CHECK(v[0].item_ids == std::vector<int>{1, 2});

  CHECK(profit(Packing(inst, {{1, 0, 0, false}})) == 7);

  auto bad = validate_packing(Packing(inst, {{1, 4, 0, false}, {1, 0, 0, false}, {5, 0, 0, false},
                                             {2, 0, 1, true}}));
  std::vector<ViolationKind> kinds;
  for (const auto& x : bad) kinds.push_back(x.kind);
  CHECK(std::count(kinds.begin(), kinds.end(), ViolationKind::OutOfBounds) == 1);
  CHECK(std::count(kinds.begin(), kinds.end(), ViolationKind::DuplicateItem) == 1);
  CHECK(std::count(kinds.begin(), kinds.end(), ViolationKind::UnknownItem) == 1);
  CHECK(std::count(kinds.begin(), kinds.end(), ViolationKind::IllegalRotation) == 1);
}

TEST_CASE("pinwheel is a valid packing") {
  CHECK(validate_packing(pinwheel()).empty());
}

TEST_CASE("hard family k=5 has profit 10 and matches the figure coordinates") {
  auto hf = gen_hard_family(5);
  CHECK(hf.instance->side() == 64);
  CHECK(validate_packing(hf.packing).empty());
  CHECK(profit(hf.packing) == 10);
  std::vector<Rect> expect{{0, 0, 64, 1},   {0, 1, 1, 64},   {1, 1, 64, 3},   {1, 3, 3, 64},
                           {3, 3, 64, 7},   {3, 7, 7, 64},   {7, 7, 64, 15},  {7, 15, 15, 64},
                           {15, 15, 64, 31}, {15, 31, 31, 64}};
  auto placed = hf.packing.placed();
  REQUIRE(placed.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(placed[i].rect == expect[i]);
}

TEST_CASE("hard family k=1") {
  auto hf = gen_hard_family(1);
  auto p = hf.packing.placed();
  CHECK(hf.instance->side() == 4);
  CHECK(p[0].rect == Rect{0, 0, 4, 1});
  CHECK(p[1].rect == Rect{0, 1, 1, 4});
}

TEST_CASE("validate_packing is order-insensitive and idempotent") {
  auto hf = gen_hard_family(4);
  auto ps = hf.packing.placements();
  ps.push_back({3, 0, 0, false});  // duplicate, also overlapping
  std::mt19937 rng(3);
  auto sig = [](std::vector<Violation> v) {
    std::vector<std::pair<int, std::vector<int>>> s;
    for (auto& x : v) s.emplace_back(static_cast<int>(x.kind), x.item_ids);
    std::sort(s.begin(), s.end());
    return s;
  };
  auto base = sig(validate_packing(Packing(hf.instance, ps)));
  CHECK(!base.empty());
  for (int t = 0; t < 20; ++t) {
    std::shuffle(ps.begin(), ps.end(), rng);
    CHECK(sig(validate_packing(Packing(hf.instance, ps))) == base);
  }
}

TEST_CASE("profit is monotone under adding placements") {
  auto hf = gen_hard_family(3);
  std::vector<Placement> ps;
  Profit last = 0;
  for (const auto& p : hf.packing.placements()) {
    ps.push_back(p);
    Profit now = profit(Packing(hf.instance, ps));
    CHECK(now >= last);
    last = now;
  }
}

TEST_CASE("rationals parse exactly") {
  CHECK(parse_rational("1/3") == Rational(1, 3));
  CHECK(parse_rational("0.05") == Rational(1, 20));
  CHECK(parse_rational("-2.5") == Rational(-5, 2));
  CHECK(parse_rational(" 7 ") == Rational(7));
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(floor_of(Rational(-3, 2)) == -2);
  CHECK(ceil_of(Rational(3, 2)) == 2);
  CHECK_FALSE(greater_than_fraction(16, Rational(1, 4), 64));
  CHECK(greater_than_fraction(17, Rational(1, 4), 64));
}

TEST_CASE("json round trips") {
  auto hf = gen_hard_family(3);
  Json j = packing_to_json(hf.packing);
  Packing back = packing_from_json(j);
  CHECK(back.placements() == hf.packing.placements());
  CHECK(back.instance().items() == hf.instance->items());
  CHECK_THROWS_AS(instance_from_json(Json{{"items", Json::array()}}), InputError);
  CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"N":4,"items":[{"id":1,"w":"x","h":1}]})")),
                  InputError);
}

TEST_CASE("budget environment cap") {
  setenv("GUILLOPACK_BUDGET", "10", 1);
  CHECK(effective_budget(100) == 10);
  CHECK(effective_budget(5) == 5);
  unsetenv("GUILLOPACK_BUDGET");
  CHECK(effective_budget(100) == 100);
}
