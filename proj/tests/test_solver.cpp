#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "guillopack/generators.hpp"
#include "guillopack/solver.hpp"
#include "oracles.hpp"

using namespace guillopack;

namespace {

std::shared_ptr<const Instance> make(Coord n, std::vector<Item> items) {
  return std::make_shared<const Instance>(n, std::move(items));
}

void check_sound(const Packing& p) {
  REQUIRE(validate_packing(p).empty());
  REQUIRE(is_separable(check_guillotine(p)));
}

}  // namespace

TEST_CASE("flavor and mode parsing") {
  CHECK(parse_flavor("free").kind == Flavor::Kind::Free);
  CHECK(parse_flavor("stages:3").stages == 3);
  CHECK(to_string(parse_flavor("guillotine")) == "guillotine");
  CHECK_THROWS_AS(parse_flavor("stages:x"), InputError);
  CHECK_THROWS_AS(parse_flavor("tree"), InputError);
  CHECK(parse_skewed_mode("few") == SkewedMode::Few);
  CHECK_THROWS_AS(parse_skewed_mode("some"), InputError);
  SolverConfig cfg;
  cfg.eps = Rational(1);
  CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("oracle: one item and pinwheel") {
  auto one = make(10, {{1, 3, 4, 7}});
  for (auto f : {"free", "guillotine", "stages:2"}) {
    auto r = oracle_exact(one, parse_flavor(f));
    CHECK(r.value == 7);
    CHECK(r.complete);
  }
  auto pw = pinwheel();
  auto inst = pw.instance_ptr();
  auto g = oracle_exact(inst, parse_flavor("guillotine"));
  auto f = oracle_exact(inst, parse_flavor("free"));
  CHECK(g.complete);
  CHECK(f.complete);
  CHECK(g.packing.size() == 3);
  CHECK(f.packing.size() == 4);
  CHECK(validate_packing(f.packing).empty());
  CHECK_FALSE(is_separable(check_guillotine(f.packing)));
  check_sound(g.packing);
}

TEST_CASE("oracle agrees with brute force and is monotone in the flavor") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::mt19937_64 rng(seed);
    Coord n = std::uniform_int_distribution<Coord>(4, 7)(rng);
    int m = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<Item> items;
    for (int i = 0; i < m; ++i)
      items.push_back({i + 1, std::uniform_int_distribution<Coord>(1, n)(rng),
                       std::uniform_int_distribution<Coord>(1, n)(rng), 1});
    auto inst = make(n, items);
    auto free = oracle_exact(inst, parse_flavor("free"));
    auto gui = oracle_exact(inst, parse_flavor("guillotine"));
    REQUIRE(free.complete);
    REQUIRE(gui.complete);
    CHECK(free.value == oracle::best_count_with_stages(items, n, 1 << 19));
    CHECK(gui.value == oracle::best_count_with_stages(items, n, (1 << 20) - 1));
    CHECK(free.value >= gui.value);
    check_sound(gui.packing);
    Profit prev = 0;
    for (int k = 1; k <= 4; ++k) {
      auto s = oracle_exact(inst, parse_flavor("stages:" + std::to_string(k)));
      CHECK(s.value >= prev);
      CHECK(s.value <= gui.value);
      CHECK(s.value == oracle::best_count_with_stages(items, n, k));
      prev = s.value;
    }
  }
}

TEST_CASE("oracle budget exhaustion is flagged") {
  auto inst = std::make_shared<const Instance>(gen_random(12, 40, RandomProfile::Uniform, 3, true));
  auto r = oracle_exact(inst, parse_flavor("free"), 50);
  CHECK_FALSE(r.complete);
  CHECK(validate_packing(r.packing).empty());
}

TEST_CASE("solve_cardinality: degenerate cases") {
  SolverConfig cfg;
  cfg.thresholds = fixtures::kPlantedT;
  SUBCASE("one box of horizontals equals the stack knapsack") {
    std::vector<Item> items;
    for (int i = 1; i <= 30; ++i) items.push_back({i, 17 + i % 20, 1 + i % 4, 1});
    auto inst = make(64, items);
    PseudoGuillotineTree t(64);
    t.set_box_kind(t.root(), BoxKind::HorizontalStack);
    auto r = solve_cardinality(inst, t, cfg);
    check_sound(r.packing);
    CHECK(r.packing.size() == stack_knapsack(items, 64, Objective::Cardinality).ids.size());
  }
  SUBCASE("no items") {
    auto r = solve_cardinality(make(64, {}), PseudoGuillotineTree(64), cfg);
    CHECK(r.packing.empty());
  }
  SUBCASE("wrong side") {
    CHECK_THROWS_AS(solve_cardinality(make(32, {}), PseudoGuillotineTree(64), cfg), InputError);
  }
}

TEST_CASE("solve_cardinality: plant and recover") {
  SolverConfig cfg;
  cfg.thresholds = fixtures::kPlantedT;
  for (bool kinds : {true, false})
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      auto pf = fixtures::planted_fixture(seed, kinds);
      auto r = solve_cardinality(pf.inst, pf.tree, cfg);
      check_sound(r.packing);
      double floor = (1 - 1.0 / 3) * pf.planted - 3;
      CAPTURE(seed);
      CAPTURE(kinds);
      CAPTURE(pf.planted);
      CHECK(static_cast<double>(r.packing.size()) >= floor);
    }
}

TEST_CASE("solve_cardinality never beats the guillotine oracle") {
  SolverConfig cfg;
  cfg.enumeration.max_trees = 60;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto inst = std::make_shared<const Instance>(gen_random(5, 12, RandomProfile::Mixed, seed, true));
    auto g = oracle_exact(inst, parse_flavor("guillotine"));
    if (!g.complete) continue;
    auto r = solve_enumerated(inst, cfg);
    check_sound(r.packing);
    CHECK(static_cast<Profit>(r.packing.size()) <= g.value);
    CHECK(r.stats.trees_evaluated > 0);
  }
}

TEST_CASE("few items path") {
  auto cf = fixtures::color_fixture();
  const auto& t = cf.t;
  const auto& targets = cf.targets;
  const auto& items = cf.items;
  SUBCASE("planted coloring is exact") {
    std::vector<int> color{0, 1, 2, 3, 4, 5};
    auto a = best_for_coloring(items, targets, 64, t, color, 6);
    CHECK(a.count == 4);
    std::vector<int> clash{0, 0, 1, 1, 0, 1};
    CHECK(best_for_coloring(items, targets, 64, t, clash, 2).count == 4);
  }
  SUBCASE("singleton optimum") {
    std::vector<Item> one{{9, 20, 3, 1}};
    ColorCoding cc;
    cc.colors = 1;
    cc.repetitions = 1;
    CHECK(few_items_path(one, targets, 64, t, cc).count == 1);
  }
  SUBCASE("no skewed items") {
    ColorCoding cc;
    cc.colors = 3;
    CHECK(few_items_path({}, targets, 64, t, cc).count == 0);
  }
  SUBCASE("monte carlo recovery") {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      ColorCoding cc;
      cc.colors = 6;
      cc.target = 4;
      cc.repetitions = static_cast<int>(std::ceil(std::exp(4.0) * std::log(20.0)));
      cc.seed = seed;
      auto a = few_items_path(items, targets, 64, t, cc);
      hits += a.count == 4;
      CHECK(a.colorings == cc.repetitions);
    }
    CHECK(hits >= 95);
  }
}

TEST_CASE("many items path") {
  const ClassThresholds t{Rational(1, 3), Rational(1, 4), Rational(1, 16)};
  SUBCASE("identical items fill capacity") {
    std::vector<SkewedTarget> targets{{BoxCompartment{{0, 0, 64, 64}, BoxKind::HorizontalStack}, 0}};
    std::vector<Item> items;
    for (int i = 1; i <= 40; ++i) items.push_back({i, 20, 3, 1});
    auto a = many_items_path(items, targets, 64, t, Rational(1, 3));
    CHECK(a.count == 21);
  }
  SUBCASE("two groups, two compartments") {
    std::vector<SkewedTarget> targets{{BoxCompartment{{0, 0, 32, 64}, BoxKind::HorizontalStack}, 0},
                                      {BoxCompartment{{32, 0, 64, 64}, BoxKind::VerticalStack}, 1}};
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      std::mt19937_64 rng(seed);
      auto uni = [&](Coord lo, Coord hi) { return std::uniform_int_distribution<Coord>(lo, hi)(rng); };
      std::vector<Item> items;
      int id = 1, planted = 0;
      for (Coord y = 0;;) {
        Coord h = uni(1, 2) * 2;  // two height groups
        if (y + h > 64) break;
        items.push_back({id++, uni(17, 32), h, 1});
        y += h;
        ++planted;
      }
      for (Coord x = 0;;) {
        Coord w = uni(1, 2) * 2;
        if (x + w > 32) break;
        items.push_back({id++, w, uni(17, 64), 1});
        x += w;
        ++planted;
      }
      auto a = many_items_path(items, targets, 64, t, Rational(1, 3));
      CAPTURE(seed);
      CHECK(a.count == planted);
      std::vector<PlacedItem> all;
      for (const auto& v : a.per_target) all.insert(all.end(), v.begin(), v.end());
      CHECK(validate_packing(Packing::from_placed(make(64, items), all)).empty());
    }
  }
}

TEST_CASE("split by profit threshold") {
  SUBCASE("unit profits") {
    std::vector<Item> items;
    for (int i = 1; i <= 40; ++i) items.push_back({i, 1, 1, 1});
    auto s = split_by_profit_threshold(items, 1, 64, Rational(1, 2));
    // log2(40 * 64) = 11.32..., so the 12th item.
    REQUIRE(s.pivot);
    CHECK(*s.pivot == 12);
    CHECK(s.high.empty());
    CHECK(s.low.size() == 40);
  }
  SUBCASE("single item") {
    std::vector<Item> one{{5, 1, 1, 9}};
    auto s = split_by_profit_threshold(one, 1, 64, Rational(1, 2));
    CHECK(s.high.size() == 1);
    CHECK(s.low.empty());
    CHECK_FALSE(s.pivot);
  }
  SUBCASE("floor drops all but one") {
    std::vector<Item> items{{1, 1, 1, 1000}, {2, 1, 1, 1}, {3, 1, 1, 2}};
    auto s = split_by_profit_threshold(items, 1, 64, Rational(1, 2));
    CHECK(s.dropped.size() == 2);
    CHECK(s.high.size() + s.low.size() == 1);
  }
  SUBCASE("geometric profits") {
    std::vector<Item> items;
    for (int i = 0; i < 12; ++i) items.push_back({i + 1, 1, 1, Profit{1} << (11 - i)});
    auto s = split_by_profit_threshold(items, 1, 4, Rational(1, 2));
    // prefix/p(i) = 2^(i+1) - 1 against log2(48) = 5.58: i = 2.
    REQUIRE(s.pivot);
    CHECK(*s.pivot == 3);
    CHECK(s.high.size() == 2);
  }
}

TEST_CASE("compartment enumeration") {
  const ClassThresholds t{Rational(1, 2), Rational(1, 4), Rational(1, 16)};
  bool truncated = false;
  EnumerationConfig shallow;
  shallow.depth = 1;
  auto one = enumerate_compartments(32, t, shallow, &truncated);
  // root + 2 * 7 cuts + 4 corners * 2 * 2 arms (arms 7 and 3 at N = 32)
  CHECK(one.size() == 1 + 14 + 16);
  CHECK_FALSE(truncated);
  for (const auto& tr : one) CHECK(tr.problems(t.eps_large).empty());
  EnumerationConfig deep;
  deep.max_trees = 50;
  auto many = enumerate_compartments(32, t, deep, &truncated);
  CHECK(many.size() == 50);
  CHECK(truncated);
  for (const auto& tr : many) CHECK(tr.problems(t.eps_large).empty());
}

TEST_CASE("solve_enumerated on a planted layout") {
  auto pf = fixtures::planted_fixture(5, true);
  SolverConfig cfg;
  cfg.thresholds = fixtures::kPlantedT;
  cfg.enumeration.max_trees = 80;
  auto r = solve_enumerated(pf.inst, cfg);
  check_sound(r.packing);
  CHECK(r.packing.size() > 0);
  CHECK(r.stats.trees_evaluated == 80);
  CHECK(r.stats.enumeration_truncated);
}
