#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "guillopack/core.hpp"
#include "guillopack/rational.hpp"

namespace guillopack {

struct ClassThresholds {
  Rational eps{1, 2};
  Rational eps_large{1, 4};
  Rational eps_small{1, 16};

  /// Throws InputError unless 1 > eps >= eps_large > eps_small > 0.
  void validate() const;
};

enum class ItemClass { Large, Small, Horizontal, Vertical, Intermediate };

struct Classification {
  ItemClass cls = ItemClass::Intermediate;
  bool skewed = false;
  bool wide = false;  // width > N/2
  bool tall = false;  // height > N/2
  bool is_long() const { return wide || tall; }
  bool is_short() const { return !is_long(); }
};

Classification classify(const Item& item, const ClassThresholds& t, Coord n);
std::string to_string(ItemClass c);

inline bool is_wide(const Item& it, Coord n) { return 2 * it.width > n; }
inline bool is_tall(const Item& it, Coord n) { return 2 * it.height > n; }
inline bool is_long(const Item& it, Coord n) { return is_wide(it, n) || is_tall(it, n); }

using ShrinkMap = std::function<Rational(const Rational&)>;

/// x -> x^2 / 8
Rational default_shrink(const Rational& x);

struct ThresholdChoice {
  ClassThresholds chosen;
  std::vector<ClassThresholds> candidates;
  std::vector<Profit> intermediate_profit;  // per candidate
  Profit best = 0;
  /// Enough disjoint bands were available for the averaging bound
  /// best <= eps * p(I) to be implied.
  bool guaranteed = false;
};

/// Walks the chain eps, f(eps), f(f(eps)), ... and tries each consecutive
/// pair as (eps_large, eps_small). At most ceil(2/eps) pairs are tried: an
/// item can be intermediate through its width and its height in two
/// different bands, so that many pairs make the average at most eps * p(I).
/// The chain stops once eps_small * N < 1; the first pair is always kept.
ThresholdChoice choose_thresholds(const Instance& inst, const Rational& eps,
                                  const ShrinkMap& f = default_shrink);

Profit intermediate_profit(const Instance& inst, const ClassThresholds& t);

}  // namespace guillopack
