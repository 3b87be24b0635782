#include "guillopack/classify.hpp"

namespace guillopack {

void ClassThresholds::validate() const {
  if (!(eps > 0 && eps < 1)) throw InputError("eps must lie in (0,1)");
  if (!(eps >= eps_large && eps_large > eps_small && eps_small > 0))
    throw InputError("thresholds must satisfy eps >= eps_large > eps_small > 0");
}

Classification classify(const Item& item, const ClassThresholds& t, Coord n) {
  // 0: <= eps_small N, 1: intermediate band, 2: > eps_large N
  auto zone = [&](Coord len) {
    if (greater_than_fraction(len, t.eps_large, n)) return 2;
    if (greater_than_fraction(len, t.eps_small, n)) return 1;
    return 0;
  };
  int zw = zone(item.width), zh = zone(item.height);
  Classification c;
  if (zw == 1 || zh == 1) c.cls = ItemClass::Intermediate;
  else if (zw == 2 && zh == 2) c.cls = ItemClass::Large;
  else if (zw == 0 && zh == 0) c.cls = ItemClass::Small;
  else if (zw == 2) c.cls = ItemClass::Horizontal;
  else c.cls = ItemClass::Vertical;
  c.skewed = c.cls == ItemClass::Horizontal || c.cls == ItemClass::Vertical;
  c.wide = is_wide(item, n);
  c.tall = is_tall(item, n);
  return c;
}

std::string to_string(ItemClass c) {
  switch (c) {
    case ItemClass::Large: return "large";
    case ItemClass::Small: return "small";
    case ItemClass::Horizontal: return "horizontal";
    case ItemClass::Vertical: return "vertical";
    case ItemClass::Intermediate: return "intermediate";
  }
  return "intermediate";
}

Rational default_shrink(const Rational& x) { return x * x / 8; }

Profit intermediate_profit(const Instance& inst, const ClassThresholds& t) {
  Profit s = 0;
  for (const auto& it : inst.items())
    if (classify(it, t, inst.side()).cls == ItemClass::Intermediate) s += it.profit;
  return s;
}

ThresholdChoice choose_thresholds(const Instance& inst, const Rational& eps, const ShrinkMap& f) {
  if (!(eps > 0 && eps < 1)) throw InputError("eps must lie in (0,1)");
  const BigInt wanted_big = ceil_of(Rational(2) / eps);
  const long wanted = wanted_big > 1000 ? 1000 : wanted_big.convert_to<long>();
  ThresholdChoice out;
  Rational x = eps;
  for (long t = 0; t < wanted; ++t) {
    Rational y = f(x);
    if (!(y > 0 && y < x)) throw InputError("shrink map must satisfy 0 < f(x) < x");
    if (t > 0 && y * inst.side() < 1) break;
    out.candidates.push_back({eps, x, y});
    x = y;
  }
  for (const auto& c : out.candidates) out.intermediate_profit.push_back(intermediate_profit(inst, c));
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.candidates.size(); ++i)
    if (out.intermediate_profit[i] < out.intermediate_profit[best]) best = i;
  out.chosen = out.candidates[best];
  out.best = out.intermediate_profit[best];
  out.guaranteed = static_cast<long>(out.candidates.size()) >= wanted;
  return out;
}

}  // namespace guillopack
