#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guillopack/classify.hpp"
#include "guillopack/compartments.hpp"
#include "guillopack/core.hpp"
#include "guillopack/guillotine.hpp"
#include "guillopack/packers.hpp"
#include "guillopack/rational.hpp"

namespace guillopack {

// ---------------------------------------------------------------------------
// Exhaustive oracles

struct Flavor {
  enum class Kind { Free, Guillotine, Stages };
  Kind kind = Kind::Free;
  int stages = 0;  // for Kind::Stages
};

Flavor parse_flavor(const std::string& s);  // "free", "guillotine", "stages:k"
std::string to_string(const Flavor& f);

struct OracleResult {
  Packing packing;
  Profit value = 0;
  bool complete = true;
  std::int64_t expansions = 0;
  Flavor flavor;
};

/// Exact optimum by trying subsets in decreasing profit order and placing
/// each at normal positions (subset sums of the chosen sides). Guillotine
/// candidates are filtered by check_guillotine; the staged flavor runs the
/// stage-bounded tree search. Running out of `budget` leaves complete = false
/// and the best packing found so far.
OracleResult oracle_exact(const std::shared_ptr<const Instance>& inst, const Flavor& flavor,
                          std::int64_t budget = 50'000'000);

// ---------------------------------------------------------------------------
// Cardinality pipeline

enum class SkewedMode { Auto, Few, Many };

std::string to_string(SkewedMode m);
SkewedMode parse_skewed_mode(const std::string& s);

struct ColorCoding {
  int colors = 0;       // 0: ceil(c * log2(nN)), capped at 8
  int repetitions = 0;  // 0: ceil(e^k' * ln(1/delta))
  int target = 0;       // k'; 0: the running best skewed count, capped at colors
  double delta = 0.05;
  std::uint64_t seed = 1;
};

struct EnumerationConfig {
  int depth = 3;
  Coord grid = 0;          // 0: max(1, N/8)
  int max_trees = 400;     // trees evaluated at most
};

struct SolverConfig {
  Rational eps{1, 3};
  std::optional<ClassThresholds> thresholds;  // default: choose_thresholds(eps)
  int regime_c = 1;                           // few-items path iff best <= c * log2(nN)
  SkewedMode mode = SkewedMode::Auto;
  ColorCoding color;
  EnumerationConfig enumeration;
  GapMode gap_mode = GapMode::Exact;
  std::int64_t budget = 4'000'000;

  void validate() const;
};

struct SolveStats {
  std::string skewed_path;  // "few", "many", "none"
  double regime_threshold = 0;
  int colors = 0;
  int repetitions = 0;
  int trees_evaluated = 0;
  bool enumeration_truncated = false;
  bool gap_fell_back = false;
  int large = 0, small = 0, skewed = 0, intermediate = 0;
};

struct SolveResult {
  Packing packing;
  GuillotineTree tree;
  PseudoGuillotineTree compartments{1};
  std::map<int, std::vector<PlacedItem>> fillings;
  SolveStats stats;
};

/// Fills the given compartments nicely and composes the result. Single
/// boxes take large items by matching, small-area boxes take small items by
/// GAP, stacks and L-compartments take skewed items. Boxes of kind Any get
/// their role from a small search over role assignments.
SolveResult solve_cardinality(const std::shared_ptr<const Instance>& inst, const PseudoGuillotineTree& compartments,
                              const SolverConfig& cfg);

/// Pseudo-guillotine trees of depth <= cfg.depth with cuts on the grid and
/// peels of thin L-compartments, in order of increasing depth, at most
/// cfg.max_trees of them. `truncated` reports whether the cap was hit.
std::vector<PseudoGuillotineTree> enumerate_compartments(Coord n, const ClassThresholds& t,
                                                         const EnumerationConfig& cfg, bool* truncated = nullptr);

/// Runs solve_cardinality on every enumerated compartment set and keeps the
/// largest result.
SolveResult solve_enumerated(const std::shared_ptr<const Instance>& inst, const SolverConfig& cfg);

/// Skewed-item targets: stacks and L-compartments.
struct SkewedTarget {
  Compartment compartment;
  int leaf = -1;
};

struct SkewedAssignment {
  std::vector<std::vector<PlacedItem>> per_target;
  int count = 0;
  int colorings = 0;
};

/// Color coding: R random colorings with `colors` colors; per coloring a DP
/// over color subsets and targets, each target solved exactly for the items
/// of its colors.
SkewedAssignment few_items_path(std::span<const Item> skewed, std::span<const SkewedTarget> targets, Coord n,
                                const ClassThresholds& t, const ColorCoding& cc);

/// The exact DP of one round: `color[i]` in [0, colors) per skewed item.
SkewedAssignment best_for_coloring(std::span<const Item> skewed, std::span<const SkewedTarget> targets, Coord n,
                                   const ClassThresholds& t, std::span<const int> color, int colors);

/// Height groups, a lattice of prefix sizes, linear grouping and a greedy
/// count assignment of the rounded classes to targets, then unrounding.
SkewedAssignment many_items_path(std::span<const Item> skewed, std::span<const SkewedTarget> targets, Coord n,
                                 const ClassThresholds& t, const Rational& eps);

/// Best nice filling of one target from `items`, maximizing the count.
std::vector<PlacedItem> solve_target(const SkewedTarget& target, std::span<const Item> items, Coord n,
                                     const ClassThresholds& t);

struct ProfitSplit {
  std::vector<Item> high;
  std::vector<Item> low;
  std::vector<Item> dropped;  // below the (eps / 2n) * max floor
  std::optional<int> pivot;   // id of i*
};

/// Items by non-increasing profit (ties by id). i* is the first item whose
/// prefix profit reaches c * log2(nN) * p(i*); high = {p > p(i*)}.
ProfitSplit split_by_profit_threshold(std::span<const Item> items, int c, Coord n, const Rational& eps);

}  // namespace guillopack
