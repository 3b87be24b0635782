#include "guillopack/generators.hpp"

#include <algorithm>
#include <random>

namespace guillopack {

HardFamily gen_hard_family(int k) {
  if (k < 1 || k > 28) throw InputError("hard family needs 1 <= k <= 28");
  Coord n = Coord{1} << (k + 1);
  std::vector<Item> items;
  std::vector<Placement> placements;
  for (int j = 1; j <= k; ++j) {
    Coord half = Coord{1} << (j - 1);  // 2^(j-1)
    Coord offset = half - 1;
    items.push_back({2 * j - 1, n - offset, half, 1});
    placements.push_back({2 * j - 1, offset, offset, false});
    items.push_back({2 * j, half, n - (2 * half - 1), 1});
    placements.push_back({2 * j, offset, 2 * half - 1, false});
  }
  HardFamily out;
  out.k = k;
  out.instance = std::make_shared<const Instance>(n, std::move(items));
  out.packing = Packing(out.instance, std::move(placements));
  return out;
}

Packing pinwheel() {
  std::vector<Item> items{{1, 15, 8, 1}, {2, 8, 15, 1}, {3, 15, 8, 1}, {4, 8, 15, 1}};
  auto inst = std::make_shared<const Instance>(24, std::move(items));
  return Packing(inst, {{1, 0, 0, false}, {2, 0, 9, false}, {3, 9, 16, false}, {4, 16, 0, false}});
}

RandomProfile parse_profile(const std::string& name) {
  if (name == "skewed") return RandomProfile::Skewed;
  if (name == "mixed") return RandomProfile::Mixed;
  if (name == "small") return RandomProfile::Small;
  if (name == "uniform") return RandomProfile::Uniform;
  throw InputError("unknown profile '" + name + "'");
}

std::string to_string(RandomProfile p) {
  switch (p) {
    case RandomProfile::Skewed: return "skewed";
    case RandomProfile::Mixed: return "mixed";
    case RandomProfile::Small: return "small";
    case RandomProfile::Uniform: return "uniform";
  }
  return "uniform";
}

namespace {

Coord draw(std::mt19937_64& rng, Coord lo, Coord hi) {
  if (hi < lo) hi = lo;
  return std::uniform_int_distribution<Coord>(lo, hi)(rng);
}

// Horizontal for (1/4, 1/16): width > N/4, height <= N/16.
Item skewed_item(std::mt19937_64& rng, Coord n, int id) {
  Coord long_side = draw(rng, n / 4 + 1, n);
  Coord short_side = draw(rng, 1, std::max<Coord>(1, n / 16));
  bool wide = draw(rng, 0, 1) == 0;
  return wide ? Item{id, long_side, short_side, 1} : Item{id, short_side, long_side, 1};
}

}  // namespace

Instance gen_random(int n, Coord side, RandomProfile profile, std::uint64_t seed, bool unit_profit) {
  if (n < 0 || side < 1) throw InputError("gen_random needs n >= 0 and N >= 1");
  if (profile == RandomProfile::Skewed && side < 16)
    throw InputError("skewed profile needs N >= 16");
  std::mt19937_64 rng(seed);
  std::vector<Item> items;
  for (int i = 0; i < n; ++i) {
    int id = i + 1;
    Item it;
    switch (profile) {
      case RandomProfile::Skewed:
        it = skewed_item(rng, side, id);
        break;
      case RandomProfile::Small: {
        Coord cap = std::max<Coord>(1, side / 16);
        it = {id, draw(rng, 1, cap), draw(rng, 1, cap), 1};
        break;
      }
      case RandomProfile::Mixed: {
        auto kind = draw(rng, 0, 3);
        if (kind == 0 && side >= 16) {
          it = skewed_item(rng, side, id);
        } else if (kind == 1) {
          Coord cap = std::max<Coord>(1, side / 16);
          it = {id, draw(rng, 1, cap), draw(rng, 1, cap), 1};
        } else if (kind == 2) {
          it = {id, draw(rng, side / 4 + 1, side), draw(rng, side / 4 + 1, side), 1};
        } else {
          it = {id, draw(rng, 1, side), draw(rng, 1, side), 1};
        }
        break;
      }
      case RandomProfile::Uniform:
        it = {id, draw(rng, 1, side), draw(rng, 1, side), 1};
        break;
    }
    it.profit = unit_profit ? 1 : draw(rng, 1, 20);
    items.push_back(it);
  }
  return Instance(side, std::move(items));
}

}  // namespace guillopack
