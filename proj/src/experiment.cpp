#include "guillopack/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "guillopack/guillotine.hpp"
#include "guillopack/packers.hpp"

namespace guillopack {

RatioTable ratio_experiment(const std::vector<NamedInstance>& instances, std::int64_t budget) {
  RatioTable t;
  for (const auto& ni : instances) {
    RatioRow row;
    row.name = ni.name;
    auto f = oracle_exact(ni.instance, {Flavor::Kind::Free, 0}, budget);
    auto g = oracle_exact(ni.instance, {Flavor::Kind::Guillotine, 0}, budget);
    row.free = f.value;
    row.guillotine = g.value;
    row.complete = f.complete && g.complete;
    if (g.value > 0) row.ratio = Rational(f.value) / g.value;
    if (row.complete) {
      if (row.ratio > t.max_ratio) t.max_ratio = row.ratio;
    } else {
      ++t.excluded;
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

bool verified(const Packing& p) {
  return validate_packing(p).empty() && is_separable(check_guillotine(p));
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<NamedInstance>& instances, const std::vector<std::string>& solvers,
                                const SolverConfig& cfg, std::int64_t oracle_budget) {
  using Clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (const auto& ni : instances) {
    std::optional<Profit> opt;
    if (ni.instance->size() <= 8) {
      auto g = oracle_exact(ni.instance, {Flavor::Kind::Guillotine, 0}, oracle_budget);
      if (g.complete) opt = g.value;
    }
    for (const auto& name : solvers) {
      BenchRow row;
      row.instance = ni.name;
      row.solver = name;
      row.oracle = opt;
      auto start = Clock::now();
      Packing p;
      if (name == "pipeline") {
        p = solve_enumerated(ni.instance, cfg).packing;
      } else if (name == "nfdh") {
        const Coord n = ni.instance->side();
        p = Packing::from_placed(ni.instance, nfdh_pack(ni.instance->items(), Rect{0, 0, n, n}).placed);
      } else if (name == "oracle") {
        p = oracle_exact(ni.instance, {Flavor::Kind::Guillotine, 0}, oracle_budget).packing;
      } else {
        auto f = parse_flavor(name);
        if (f.kind != Flavor::Kind::Stages) throw InputError("unknown bench solver '" + name + "'");
        p = oracle_exact(ni.instance, f, oracle_budget).packing;
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      // The pipeline maximizes the count; other solvers report profit.
      row.value = name == "pipeline" ? static_cast<Profit>(p.size()) : profit(p);
      row.verified = verified(p);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream o;
  o << "instance,solver,value,oracle_value,wall_ms,verified\n";
  for (const auto& r : rows) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
    o << csv_field(r.instance) << ',' << csv_field(r.solver) << ',' << r.value << ','
      << (r.oracle ? std::to_string(*r.oracle) : std::string()) << ',' << ms << ',' << (r.verified ? "true" : "false")
      << '\n';
  }
  return o.str();
}

std::string ratio_csv(const RatioTable& t) {
  std::ostringstream o;
  o << "instance,free,guillotine,ratio,complete\n";
  for (const auto& r : t.rows)
    o << csv_field(r.name) << ',' << r.free << ',' << r.guillotine << ',' << to_string(r.ratio) << ','
      << (r.complete ? "true" : "false") << '\n';
  return o.str();
}

}  // namespace guillopack
