#include <doctest.h>

#include <regex>

#include "guillopack/experiment.hpp"
#include "guillopack/generators.hpp"
#include "guillopack/io.hpp"
#include "guillopack/render.hpp"

using namespace guillopack;

TEST_CASE("hard family shape") {
  for (int k = 1; k <= 8; ++k) {
    auto hf = gen_hard_family(k);
    const Coord n = Coord{1} << (k + 1);
    CHECK(hf.instance->side() == n);
    CHECK(hf.instance->size() == static_cast<std::size_t>(2 * k));
    Coord tall_w = 0, wide_h = 0;
    for (const auto& it : hf.instance->items()) {
      CHECK(is_long(it, n));
      CHECK(it.profit == 1);
      if (is_tall(it, n)) tall_w += it.width;
      if (is_wide(it, n)) wide_h += it.height;
    }
    CHECK(tall_w == n / 2 - 1);
    CHECK(wide_h == n / 2 - 1);
    CHECK(validate_packing(hf.packing).empty());
    CHECK(is_separable(check_guillotine(hf.packing)));
  }
  auto k1 = gen_hard_family(1).packing.placed();
  CHECK(k1[0].rect == Rect{0, 0, 4, 1});
  CHECK(k1[1].rect == Rect{0, 1, 1, 4});
  auto k5 = gen_hard_family(5).packing.placed();
  CHECK(k5[0].rect == Rect{0, 0, 64, 1});
  CHECK(k5[1].rect == Rect{0, 1, 1, 64});
  CHECK(k5[2].rect == Rect{1, 1, 64, 3});
  CHECK(k5[3].rect == Rect{1, 3, 3, 64});
  CHECK(k5[9].rect == Rect{15, 31, 31, 64});
}

TEST_CASE("random generator") {
  auto a = instance_to_json(gen_random(20, 64, RandomProfile::Mixed, 7)).dump();
  auto b = instance_to_json(gen_random(20, 64, RandomProfile::Mixed, 7)).dump();
  CHECK(a == b);
  CHECK(gen_random(0, 64, RandomProfile::Skewed, 1).size() == 0);
  const ClassThresholds t{Rational(1, 2), Rational(1, 4), Rational(1, 16)};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = gen_random(30, 64, RandomProfile::Skewed, seed);
    for (const auto& it : inst.items()) {
      auto c = classify(it, t, 64).cls;
      CHECK((c == ItemClass::Horizontal || c == ItemClass::Vertical));
    }
  }
}

TEST_CASE("svg rendering") {
  SUBCASE("empty packing is a bare frame") {
    auto inst = std::make_shared<const Instance>(10, std::vector<Item>{});
    auto svg = render_svg(Packing(inst));
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("class=\"items\"><") == std::string::npos);
    CHECK(svg.find("<line") == std::string::npos);
  }
  SUBCASE("deterministic, flipped y and staged cuts") {
    auto hf = gen_hard_family(5);
    auto tree = std::get<GuillotineTree>(check_guillotine(hf.packing));
    auto m = build_svg_model(hf.packing, &tree);
    CHECK(m.cuts.size() == static_cast<std::size_t>(tree.cut_count()));
    int max_stage = 0;
    for (const auto& c : m.cuts) max_stage = std::max(max_stage, c.stage);
    CHECK(max_stage >= stage_count(tree).stages);
    auto s1 = render_svg(hf.packing, &tree);
    auto s2 = render_svg(hf.packing, &tree);
    CHECK(s1 == s2);
    // H1 = (0,0)-(64,1): bottom edge at pixel 8 + 512, height 8.
    CHECK(s1.find("<rect x=\"8\" y=\"512\" width=\"512\" height=\"8\"") != std::string::npos);
    std::regex stage_attr("data-stage=\"(\\d+)\"");
    CHECK(std::regex_search(s1, stage_attr));
  }
  SUBCASE("segments avoid items on random separable packings") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      auto inst = std::make_shared<const Instance>(gen_random(8, 32, RandomProfile::Mixed, seed, true));
      const Coord n = inst->side();
      auto nf = nfdh_pack(inst->items(), Rect{0, 0, n, n});
      auto p = Packing::from_placed(inst, nf.placed);
      CHECK_NOTHROW(build_svg_model(p, &nf.tree));
      auto res = check_guillotine(p);
      REQUIRE(is_separable(res));
      CHECK_NOTHROW(build_svg_model(p, &std::get<GuillotineTree>(res)));
    }
  }
  SUBCASE("a cut through an item is refused") {
    auto inst = std::make_shared<const Instance>(10, std::vector<Item>{{1, 4, 4, 1}});
    Packing p(inst, {{1, 0, 0, false}});
    GuillotineTree t(Rect{0, 0, 10, 10});
    t.split(t.root(), Orientation::Vertical, 2);
    CHECK_THROWS_AS(build_svg_model(p, &t), std::logic_error);
  }
  SUBCASE("compartment outlines") {
    PseudoGuillotineTree ct(32);
    auto [l, rest] = ct.peel(ct.root(), Corner::TopRight, 3, 3);
    (void)l;
    (void)rest;
    auto inst = std::make_shared<const Instance>(32, std::vector<Item>{});
    auto m = build_svg_model(Packing(inst), nullptr, &ct);
    REQUIRE(m.outlines.size() == 2);
    CHECK(m.outlines[0].size() == 6);
    CHECK(m.outlines[1].size() == 4);
  }
}

TEST_CASE("ratio experiment") {
  auto pw = pinwheel();
  auto one = std::make_shared<const Instance>(5, std::vector<Item>{{1, 2, 2, 3}});
  auto t = ratio_experiment({{"pinwheel", pw.instance_ptr()}, {"single", one}});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].ratio == Rational(4, 3));
  CHECK(t.rows[1].ratio == Rational(1));
  CHECK(t.max_ratio == Rational(4, 3));
  CHECK(t.excluded == 0);
  auto csv = ratio_csv(t);
  CHECK(csv.find("pinwheel,4,3,4/3,true") != std::string::npos);
  std::vector<NamedInstance> corpus;
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    corpus.push_back({"r" + std::to_string(seed),
                      std::make_shared<const Instance>(gen_random(5, 10, RandomProfile::Uniform, seed))});
  auto rt = ratio_experiment(corpus);
  for (const auto& r : rt.rows) CHECK(r.ratio >= 1);
}

TEST_CASE("bench report") {
  std::vector<NamedInstance> corpus{{"pinwheel", pinwheel().instance_ptr()},
                                    {"hard2", gen_hard_family(2).instance}};
  SolverConfig cfg;
  cfg.enumeration.max_trees = 40;
  auto rows = run_bench(corpus, {"pipeline", "nfdh", "stages:2", "oracle"}, cfg);
  REQUIRE(rows.size() == 8);
  for (const auto& r : rows) {
    CHECK(r.verified);
    REQUIRE(r.oracle);
    CHECK(r.value <= *r.oracle);
  }
  CHECK(rows[3].value == 3);
  auto csv = bench_csv(rows);
  CHECK(csv.rfind("instance,solver,value,oracle_value,wall_ms,verified\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  CHECK_THROWS_AS(run_bench(corpus, {"magic"}, cfg), InputError);
}
