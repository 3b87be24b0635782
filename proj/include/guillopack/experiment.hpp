#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "guillopack/core.hpp"
#include "guillopack/rational.hpp"
#include "guillopack/solver.hpp"

namespace guillopack {

struct NamedInstance {
  std::string name;
  std::shared_ptr<const Instance> instance;
};

struct RatioRow {
  std::string name;
  Profit free = 0;
  Profit guillotine = 0;
  Rational ratio{1};  // free / guillotine, 1 when both are 0
  bool complete = true;
};

struct RatioTable {
  std::vector<RatioRow> rows;
  Rational max_ratio{1};  // over complete rows
  int excluded = 0;
};

/// Free and guillotine optima side by side. Incomplete oracle runs are kept
/// in the table but left out of the maximum.
RatioTable ratio_experiment(const std::vector<NamedInstance>& instances, std::int64_t budget = 5'000'000);

struct BenchRow {
  std::string instance;
  std::string solver;
  Profit value = 0;
  std::optional<Profit> oracle;  // guillotine optimum when the oracle finished
  double wall_ms = 0;
  bool verified = false;  // feasible and guillotine separable
};

/// Solvers: "pipeline" (enumerated compartments), "nfdh", "stages:k",
/// "oracle". Each row is verified independently of the solver.
std::vector<BenchRow> run_bench(const std::vector<NamedInstance>& instances, const std::vector<std::string>& solvers,
                                const SolverConfig& cfg, std::int64_t oracle_budget = 2'000'000);

std::string bench_csv(const std::vector<BenchRow>& rows);
std::string ratio_csv(const RatioTable& t);

}  // namespace guillopack
