#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "guillopack/core.hpp"

namespace guillopack {

struct HardFamily {
  int k = 1;
  std::shared_ptr<const Instance> instance;
  Packing packing;
};

/// Nested corner family with N = 2^(k+1): H_j has ids 2j-1, V_j has ids 2j.
HardFamily gen_hard_family(int k);

/// The four-item pinwheel at N = 24 (a valid packing with no guillotine cut).
Packing pinwheel();

enum class RandomProfile { Skewed, Mixed, Small, Uniform };

RandomProfile parse_profile(const std::string& name);
std::string to_string(RandomProfile p);

/// Reproducible random instance. Skewed items are horizontal or vertical for
/// eps_large = 1/4, eps_small = 1/16; small items have both sides <= N/16.
Instance gen_random(int n, Coord side, RandomProfile profile, std::uint64_t seed,
                    bool unit_profit = false);

}  // namespace guillopack
