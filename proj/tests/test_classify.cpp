#include <random>

#include "doctest.h"
#include "guillopack/classify.hpp"
#include "guillopack/generators.hpp"

using namespace guillopack;

namespace {

ClassThresholds quarter() { return {Rational(1, 2), Rational(1, 4), Rational(1, 16)}; }

}  // namespace

TEST_CASE("classification examples") {
  auto c = classify({1, 64, 1, 1}, quarter(), 64);
  CHECK(c.cls == ItemClass::Horizontal);
  CHECK(c.wide);
  CHECK(c.is_long());
  CHECK(c.skewed);
  CHECK(classify({1, 64, 64, 1}, quarter(), 64).cls == ItemClass::Large);
  // Width exactly eps_large * N is not horizontal.
  CHECK(classify({1, 16, 1, 1}, quarter(), 64).cls == ItemClass::Intermediate);
  CHECK(classify({1, 4, 4, 1}, quarter(), 64).cls == ItemClass::Small);
  CHECK(classify({1, 4, 5, 1}, quarter(), 64).cls == ItemClass::Intermediate);
  CHECK(classify({1, 1, 17, 1}, quarter(), 64).cls == ItemClass::Vertical);
  CHECK(classify({1, 1, 17, 1}, quarter(), 64).is_short());
}

TEST_CASE("threshold validation") {
  CHECK_THROWS_AS((ClassThresholds{Rational(1, 2), Rational(1, 8), Rational(1, 4)}.validate()), InputError);
  CHECK_THROWS_AS((ClassThresholds{Rational(1), Rational(1, 2), Rational(1, 4)}.validate()), InputError);
  CHECK_NOTHROW(quarter().validate());
}

TEST_CASE("classes partition every instance and agree with a direct zone count") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Instance inst = gen_random(40, 64, RandomProfile::Uniform, seed);
    for (const auto& it : inst.items()) {
      auto cls = classify(it, quarter(), 64).cls;
      // Independent integer form: eps_large N = 16, eps_small N = 4.
      auto zone = [](Coord v) { return v > 16 ? 2 : (v > 4 ? 1 : 0); };
      int zw = zone(it.width), zh = zone(it.height);
      ItemClass ref = (zw == 1 || zh == 1)   ? ItemClass::Intermediate
                      : (zw == 2 && zh == 2) ? ItemClass::Large
                      : (zw == 0 && zh == 0) ? ItemClass::Small
                      : zw == 2              ? ItemClass::Horizontal
                                             : ItemClass::Vertical;
      CHECK(cls == ref);
    }
  }
}

TEST_CASE("skewed profile classifies as horizontal or vertical") {
  Instance inst = gen_random(50, 64, RandomProfile::Skewed, 5);
  for (const auto& it : inst.items()) CHECK(classify(it, quarter(), 64).skewed);
}

TEST_CASE("choose_thresholds: all large gives the first pair") {
  Instance inst(64, {{1, 40, 40, 3}, {2, 64, 50, 1}});
  auto ch = choose_thresholds(inst, Rational(1, 2), [](const Rational& x) { return x / 2; });
  CHECK(ch.best == 0);
  CHECK(ch.chosen.eps_large == Rational(1, 2));
  CHECK(ch.chosen.eps_small == Rational(1, 4));
}

TEST_CASE("choose_thresholds: an item in one band is avoided") {
  // Bands for x/2 from 1/2 at N = 64: (16,32], (8,16], (4,8], (2,4].
  Instance inst(64, {{1, 10, 64, 5}});
  auto ch = choose_thresholds(inst, Rational(1, 2), [](const Rational& x) { return x / 2; });
  REQUIRE(ch.candidates.size() == 4);
  CHECK(ch.intermediate_profit == std::vector<Profit>{0, 5, 0, 0});
  CHECK(ch.best == 0);
  CHECK(ch.chosen.eps_large == Rational(1, 2));
  CHECK(ch.guaranteed);
}

TEST_CASE("choose_thresholds: intermediate sets of distinct candidates are disjoint per dimension") {
  auto f = [](const Rational& x) { return x / 3; };
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = gen_random(30, 512, RandomProfile::Uniform, seed);
    auto ch = choose_thresholds(inst, Rational(1, 4), f);
    for (const auto& it : inst.items()) {
      int width_bands = 0, height_bands = 0;
      for (const auto& c : ch.candidates) {
        bool wi = greater_than_fraction(it.width, c.eps_small, 512) && !greater_than_fraction(it.width, c.eps_large, 512);
        bool hi = greater_than_fraction(it.height, c.eps_small, 512) && !greater_than_fraction(it.height, c.eps_large, 512);
        width_bands += wi;
        height_bands += hi;
      }
      CHECK(width_bands <= 1);
      CHECK(height_bands <= 1);
    }
  }
}

TEST_CASE("choose_thresholds meets eps * p(I) whenever enough bands exist") {
  auto f = [](const Rational& x) { return x / 2; };
  int guaranteed = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Instance inst = gen_random(20, 4096, RandomProfile::Uniform, seed);
    for (Rational eps : {Rational(1, 3), Rational(1, 2), Rational(1, 4)}) {
      auto ch = choose_thresholds(inst, eps, f);
      CHECK(ch.chosen.eps_large <= eps);
      CHECK_NOTHROW(ch.chosen.validate());
      if (ch.guaranteed) {
        ++guaranteed;
        CHECK(Rational(ch.best) <= eps * inst.total_profit());
      }
      for (Profit p : ch.intermediate_profit) CHECK(ch.best <= p);
    }
  }
  CHECK(guaranteed == 180);
}

TEST_CASE("default shrink map yields a single pair at desk scale") {
  Instance inst = gen_random(20, 64, RandomProfile::Uniform, 3);
  auto ch = choose_thresholds(inst, Rational(1, 3));
  CHECK(ch.candidates.size() == 1);
  CHECK(ch.chosen.eps_small == Rational(1, 72));
  CHECK_FALSE(ch.guaranteed);
}

TEST_CASE("bad shrink map is rejected") {
  Instance inst(8, {{1, 1, 1, 1}});
  CHECK_THROWS_AS(choose_thresholds(inst, Rational(1, 2), [](const Rational& x) { return x; }), InputError);
}
