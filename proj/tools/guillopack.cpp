// guillopack command line: every subcommand reads JSON, writes JSON/SVG/CSV.
// Exit codes: 0 ok, 1 infeasible or not separable, 2 bad input.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "guillopack/classify.hpp"
#include "guillopack/compartments.hpp"
#include "guillopack/experiment.hpp"
#include "guillopack/generators.hpp"
#include "guillopack/guillotine.hpp"
#include "guillopack/io.hpp"
#include "guillopack/lpack.hpp"
#include "guillopack/packers.hpp"
#include "guillopack/render.hpp"
#include "guillopack/solver.hpp"

using namespace guillopack;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kBadInput = 2;

struct Common {
  std::string in;
  std::string out;
  std::string svg;
  std::uint64_t seed = 1;
  std::string eps = "1/3";
  std::int64_t budget = 0;  // 0: the operation's default
};

void emit(const Json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    write_text_file(out, j.dump(2) + "\n");
  }
}

void emit_text(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") std::cout << text;
  else write_text_file(out, text);
}

// Instance files and packing files are both accepted where an instance is read.
std::shared_ptr<const Instance> load_any_instance(const std::string& path) {
  return load_packing(path).instance_ptr();
}

std::int64_t budget_or(const Common& c, std::int64_t dflt) { return c.budget > 0 ? c.budget : dflt; }

Json rect_list(const std::vector<PlacedItem>& ps) {
  Json arr = Json::array();
  for (const auto& p : ps) arr.push_back({{"id", p.item.id}, {"x", p.rect.x0}, {"y", p.rect.y0}});
  return arr;
}

Json violations_json(const std::vector<Violation>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs) arr.push_back({{"kind", to_string(v.kind)}, {"items", v.item_ids}, {"message", v.message}});
  return arr;
}

std::optional<ClassThresholds> thresholds_from(const std::string& eps, const std::string& large,
                                               const std::string& small) {
  if (large.empty() && small.empty()) return std::nullopt;
  if (large.empty() || small.empty()) throw InputError("--eps-large and --eps-small go together");
  ClassThresholds t{parse_rational(eps), parse_rational(large), parse_rational(small)};
  t.validate();
  return t;
}

Json thresholds_json(const ClassThresholds& t) {
  return {{"eps", to_string(t.eps)}, {"eps_large", to_string(t.eps_large)}, {"eps_small", to_string(t.eps_small)}};
}

std::vector<NamedInstance> corpus_from(const std::vector<std::string>& files, int random, int n, Coord side,
                                       const std::string& profile, std::uint64_t seed, bool with_pinwheel) {
  std::vector<NamedInstance> out;
  if (with_pinwheel) out.push_back({"pinwheel", pinwheel().instance_ptr()});
  for (const auto& f : files) {
    Json j = read_json_file(f);
    auto inst = j.contains("placements") ? packing_from_json(j, fs::path(f).parent_path()).instance_ptr()
                                         : std::make_shared<const Instance>(instance_from_json(j));
    out.push_back({fs::path(f).filename().string(), inst});
  }
  for (int i = 0; i < random; ++i)
    out.push_back({"random-" + std::to_string(seed + static_cast<std::uint64_t>(i)),
                   std::make_shared<const Instance>(
                       gen_random(n, side, parse_profile(profile), seed + static_cast<std::uint64_t>(i)))});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guillotine two-dimensional knapsack toolkit"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* s, bool with_in = true) {
    if (with_in) s->add_option("--in", c.in, "input JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--out", c.out, "output file (default stdout)");
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--eps", c.eps, "accuracy, e.g. 1/3");
    s->add_option("--budget", c.budget, "search budget");
  };
  int code = kOk;

  // check ------------------------------------------------------------------
  auto* check = app.add_subcommand("check", "verify a packing and find guillotine cuts");
  common(check);
  std::string tree_out;
  check->add_option("--tree-out", tree_out, "write the cut tree JSON");
  check->add_option("--svg", c.svg, "write an SVG with the cuts");
  check->callback([&] {
    Packing p = load_packing(c.in);
    auto vs = validate_packing(p);
    Json r{{"valid", vs.empty()}, {"violations", violations_json(vs)}, {"items", p.size()}, {"profit", profit(p)}};
    if (!vs.empty()) {
      r["separable"] = false;
      emit(r, c.out);
      code = kInfeasible;
      return;
    }
    auto res = check_guillotine(p);
    r["separable"] = is_separable(res);
    if (auto* t = std::get_if<GuillotineTree>(&res)) {
      auto sc = stage_count(*t);
      r["stages"] = sc.stages;
      r["cuts"] = t->cut_count();
      if (!tree_out.empty()) write_text_file(tree_out, tree_to_json(*t).dump(2) + "\n");
      if (!c.svg.empty()) write_text_file(c.svg, render_svg(p, t));
    } else {
      const auto& ns = std::get<NotSeparable>(res);
      r["stuck_piece"] = rect_to_json(ns.piece);
      r["stuck_items"] = ns.item_ids;
      if (!c.svg.empty()) write_text_file(c.svg, render_svg(p));
      code = kInfeasible;
    }
    emit(r, c.out);
  });

  // solve ------------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "cardinality pipeline over compartments");
  common(solve);
  std::string mode = "auto", comps = "enumerate", stats_out, large, small, gap_mode = "exact";
  int depth = 3, max_trees = 400, regime_c = 1, colors = 0, reps = 0;
  Coord grid = 0;
  solve->add_option("--mode", mode, "few, many or auto");
  solve->add_option("--compartments", comps, "'enumerate' or a compartment JSON file");
  solve->add_option("--stats", stats_out, "write stats JSON here (default stdout)");
  solve->add_option("--svg", c.svg, "write an SVG");
  solve->add_option("--eps-large", large);
  solve->add_option("--eps-small", small);
  solve->add_option("--depth", depth, "enumeration depth");
  solve->add_option("--grid", grid, "enumeration grid step");
  solve->add_option("--max-trees", max_trees);
  solve->add_option("--regime-c", regime_c);
  solve->add_option("--colors", colors);
  solve->add_option("--repetitions", reps);
  solve->add_option("--gap", gap_mode, "exact or greedy");
  solve->callback([&] {
    auto inst = load_any_instance(c.in);
    SolverConfig cfg;
    cfg.eps = parse_rational(c.eps);
    cfg.thresholds = thresholds_from(c.eps, large, small);
    cfg.mode = parse_skewed_mode(mode);
    cfg.regime_c = regime_c;
    cfg.color.colors = colors;
    cfg.color.repetitions = reps;
    cfg.color.seed = c.seed;
    cfg.enumeration = {depth, grid, max_trees};
    if (gap_mode != "exact" && gap_mode != "greedy") throw InputError("--gap must be exact or greedy");
    cfg.gap_mode = gap_mode == "exact" ? GapMode::Exact : GapMode::GreedyEps;
    cfg.budget = budget_or(c, cfg.budget);
    SolveResult r = comps == "enumerate"
                        ? solve_enumerated(inst, cfg)
                        : solve_cardinality(inst, pseudo_tree_from_json(read_json_file(comps)), cfg);
    emit(packing_to_json(r.packing), c.out);
    const auto& s = r.stats;
    Json st{{"items", r.packing.size()},
            {"profit", profit(r.packing)},
            {"skewed_path", s.skewed_path},
            {"regime_threshold", s.regime_threshold},
            {"colors", s.colors},
            {"repetitions", s.repetitions},
            {"trees_evaluated", s.trees_evaluated},
            {"enumeration_truncated", s.enumeration_truncated},
            {"gap_fell_back", s.gap_fell_back},
            {"classes", {{"large", s.large}, {"small", s.small}, {"skewed", s.skewed}, {"intermediate", s.intermediate}}},
            {"stages", stage_count(r.tree).stages},
            {"compartments", pseudo_tree_to_json(r.compartments)}};
    if (stats_out.empty()) {
      if (!c.out.empty() && c.out != "-") std::cout << st.dump(2) << '\n';
    } else {
      write_text_file(stats_out, st.dump(2) + "\n");
    }
    if (!c.svg.empty()) write_text_file(c.svg, render_svg(r.packing, &r.tree, &r.compartments));
  });

  // oracle -----------------------------------------------------------------
  auto* orc = app.add_subcommand("oracle", "exact optimum by exhaustive search");
  common(orc);
  std::string flavor = "guillotine";
  orc->add_option("--flavor", flavor, "free, guillotine or stages:k");
  orc->add_option("--svg", c.svg);
  orc->callback([&] {
    auto inst = load_any_instance(c.in);
    auto r = oracle_exact(inst, parse_flavor(flavor), budget_or(c, 50'000'000));
    emit(packing_to_json(r.packing), c.out);
    Json st{{"flavor", to_string(r.flavor)}, {"value", r.value}, {"complete", r.complete}, {"expansions", r.expansions}};
    std::cerr << st.dump() << '\n';
    if (!c.svg.empty()) {
      auto res = check_guillotine(r.packing);
      write_text_file(c.svg, render_svg(r.packing, std::get_if<GuillotineTree>(&res)));
    }
  });

  // lpack ------------------------------------------------------------------
  auto* lp = app.add_subcommand("lpack", "best packing of long items in a boundary L");
  common(lp);
  std::string region_file, objective = "cardinality";
  Coord h_wide = -1, w_tall = -1;
  lp->add_option("--region", region_file, "JSON {h_wide, w_tall}");
  lp->add_option("--h-wide", h_wide);
  lp->add_option("--w-tall", w_tall);
  lp->add_option("--objective", objective, "cardinality or profit");
  lp->add_option("--svg", c.svg);
  lp->callback([&] {
    auto inst = load_any_instance(c.in);
    if (!region_file.empty()) {
      Json j = read_json_file(region_file);
      h_wide = j.at("h_wide").get<Coord>();
      w_tall = j.at("w_tall").get<Coord>();
    }
    if (h_wide < 0 || w_tall < 0) throw InputError("lpack needs --region or --h-wide and --w-tall");
    LRegion reg{inst->side(), h_wide, w_tall};
    LSolution s;
    if (objective == "cardinality") s = solve_l_cardinality(inst->items(), reg);
    else if (objective == "profit") s = solve_l_profit_smalln(inst->items(), reg);
    else throw InputError("--objective must be cardinality or profit");
    auto p = Packing::from_placed(inst, s.placement);
    emit(packing_to_json(p), c.out);
    if (!c.svg.empty()) {
      PseudoGuillotineTree ct(inst->side());
      std::optional<PseudoGuillotineTree> outline;
      if (h_wide > 0 && w_tall > 0 && h_wide < inst->side() && w_tall < inst->side()) {
        ct.peel(ct.root(), Corner::BottomLeft, w_tall, h_wide);
        outline = ct;
      }
      auto res = check_guillotine(p);
      write_text_file(c.svg, render_svg(p, std::get_if<GuillotineTree>(&res), outline ? &*outline : nullptr));
    }
  });

  // nfdh -------------------------------------------------------------------
  auto* nf = app.add_subcommand("nfdh", "next-fit decreasing height shelves");
  common(nf);
  std::vector<Coord> box;
  nf->add_option("--box", box, "x0 y0 x1 y1 (default: the knapsack)")->expected(4);
  nf->callback([&] {
    auto inst = load_any_instance(c.in);
    Rect r{0, 0, inst->side(), inst->side()};
    if (!box.empty()) r = {box[0], box[1], box[2], box[3]};
    if (!r.nondegenerate() || !Rect{0, 0, inst->side(), inst->side()}.contains(r)) throw InputError("bad --box");
    auto res = nfdh_pack(inst->items(), r);
    emit(packing_to_json(Packing::from_placed(inst, res.placed)), c.out);
  });

  // gap --------------------------------------------------------------------
  auto* gp = app.add_subcommand("gap", "generalized assignment");
  common(gp);
  std::string gmode = "exact";
  gp->add_option("--mode", gmode, "exact or greedy");
  gp->callback([&] {
    Json j = read_json_file(c.in);
    GapInstance g;
    g.capacities = j.at("capacities").get<std::vector<Coord>>();
    for (const auto& e : j.at("items"))
      g.items.push_back({e.at("id").get<int>(), e.at("sizes").get<std::vector<Coord>>(),
                         e.at("profits").get<std::vector<Profit>>()});
    g.validate();
    if (gmode != "exact" && gmode != "greedy") throw InputError("--mode must be exact or greedy");
    try {
      auto r = gap_solve(g, gmode == "exact" ? GapMode::Exact : GapMode::GreedyEps, budget_or(c, 4'000'000));
      emit({{"bin_of", r.bin_of}, {"profit", r.profit}}, c.out);
    } catch (const BudgetExceeded& e) {
      std::cerr << "budget exhausted: " << e.what() << '\n';
      code = kInfeasible;
    }
  });

  // match ------------------------------------------------------------------
  auto* mt = app.add_subcommand("match", "maximum matching of items to boxes");
  common(mt);
  mt->callback([&] {
    Json j = read_json_file(c.in);
    std::vector<Item> items;
    for (const auto& e : j.at("items"))
      items.push_back({e.at("id").get<int>(), e.at("w").get<Coord>(), e.at("h").get<Coord>(),
                       e.value("p", Profit{1})});
    std::vector<Rect> boxes;
    for (const auto& b : j.at("boxes")) boxes.push_back(rect_from_json(b));
    auto m = match_large(items, boxes);
    Json pairs = Json::array();
    for (auto [id, bi] : m.pairs) pairs.push_back({id, bi});
    emit({{"pairs", pairs}, {"count", m.pairs.size()}, {"placed", rect_list(m.placed)}}, c.out);
  });

  // classify ---------------------------------------------------------------
  auto* cl = app.add_subcommand("classify", "item classes and thresholds");
  common(cl);
  std::string cl_large, cl_small;
  cl->add_option("--eps-large", cl_large);
  cl->add_option("--eps-small", cl_small);
  cl->callback([&] {
    const Instance& inst = *load_any_instance(c.in);
    auto fixed = thresholds_from(c.eps, cl_large, cl_small);
    Json r;
    ClassThresholds t;
    if (fixed) {
      t = *fixed;
    } else {
      auto choice = choose_thresholds(inst, parse_rational(c.eps));
      t = choice.chosen;
      Json cands = Json::array();
      for (std::size_t i = 0; i < choice.candidates.size(); ++i) {
        auto cj = thresholds_json(choice.candidates[i]);
        cj["intermediate_profit"] = choice.intermediate_profit[i];
        cands.push_back(cj);
      }
      r["candidates"] = cands;
      r["guaranteed"] = choice.guaranteed;
    }
    Json counts{{"large", 0}, {"small", 0}, {"horizontal", 0}, {"vertical", 0}, {"intermediate", 0}};
    Json per = Json::object();
    for (const auto& it : inst.items()) {
      auto k = to_string(classify(it, t, inst.side()).cls);
      counts[k] = counts[k].get<int>() + 1;
      per[std::to_string(it.id)] = k;
    }
    r["thresholds"] = thresholds_json(t);
    r["counts"] = counts;
    r["items"] = per;
    emit(r, c.out);
  });

  // compose ----------------------------------------------------------------
  auto* cp = app.add_subcommand("compose", "combine nice fillings of a compartment set");
  common(cp);
  std::string fill_file, cp_tree_out, cp_large, cp_small;
  cp->add_option("--fillings", fill_file, "JSON {instance, fillings}")->required()->check(CLI::ExistingFile);
  cp->add_option("--tree-out", cp_tree_out);
  cp->add_option("--svg", c.svg);
  cp->add_option("--eps-large", cp_large);
  cp->add_option("--eps-small", cp_small);
  cp->callback([&] {
    auto tree = pseudo_tree_from_json(read_json_file(c.in));
    Json fj = read_json_file(fill_file);
    if (!fj.contains("instance") || !fj.contains("fillings")) throw InputError("fillings file needs instance and fillings");
    std::shared_ptr<const Instance> inst;
    if (fj.at("instance").is_string()) {
      fs::path ip = fj.at("instance").get<std::string>();
      if (ip.is_relative()) ip = fs::path(fill_file).parent_path() / ip;
      inst = std::make_shared<const Instance>(load_instance(ip));
    } else {
      inst = std::make_shared<const Instance>(instance_from_json(fj.at("instance")));
    }
    auto fillings = fillings_from_json(fj.at("fillings"), tree, *inst);
    NiceContext ctx{parse_rational(c.eps), thresholds_from(c.eps, cp_large, cp_small), inst->side()};
    Composition comp;
    try {
      comp = compose_pseudo(tree, fillings, inst, ctx);
    } catch (const InputError& e) {
      std::cerr << "not composable: " << e.what() << '\n';
      code = kInfeasible;
      return;
    }
    emit(packing_to_json(comp.packing), c.out);
    if (!cp_tree_out.empty()) write_text_file(cp_tree_out, tree_to_json(comp.tree).dump(2) + "\n");
    if (!c.svg.empty()) write_text_file(c.svg, render_svg(comp.packing, &comp.tree, &tree));
  });

  // gen-hard ---------------------------------------------------------------
  auto* gh = app.add_subcommand("gen-hard", "nested long-item family with N = 2^(k+1)");
  common(gh, false);
  int k = 1;
  std::string inst_out;
  gh->add_option("--k", k)->required()->check(CLI::Range(1, 20));
  gh->add_option("--instance-out", inst_out, "also write the bare instance");
  gh->callback([&] {
    auto hf = gen_hard_family(k);
    emit(packing_to_json(hf.packing), c.out);
    if (!inst_out.empty()) write_text_file(inst_out, instance_to_json(*hf.instance).dump(2) + "\n");
  });

  // gen-random -------------------------------------------------------------
  auto* gr = app.add_subcommand("gen-random", "reproducible random instance");
  common(gr, false);
  int gn = 10;
  Coord gside = 64;
  std::string profile = "mixed";
  bool unit = false;
  gr->add_option("-n,--count", gn)->check(CLI::NonNegativeNumber);
  gr->add_option("-N,--side", gside)->check(CLI::PositiveNumber);
  gr->add_option("--profile", profile, "skewed, mixed, small or uniform");
  gr->add_flag("--unit-profit", unit);
  gr->callback([&] { emit(instance_to_json(gen_random(gn, gside, parse_profile(profile), c.seed, unit)), c.out); });

  // ratio ------------------------------------------------------------------
  auto* ra = app.add_subcommand("ratio", "free vs guillotine optimum");
  common(ra, false);
  std::vector<std::string> ra_files;
  int ra_random = 0, ra_n = 5;
  Coord ra_side = 10;
  std::string ra_profile = "uniform";
  bool ra_pin = false;
  ra->add_option("--in", ra_files, "instance or packing files")->check(CLI::ExistingFile);
  ra->add_option("--random", ra_random, "number of random instances");
  ra->add_option("-n,--count", ra_n);
  ra->add_option("-N,--side", ra_side);
  ra->add_option("--profile", ra_profile);
  ra->add_flag("--pinwheel", ra_pin);
  ra->callback([&] {
    auto corpus = corpus_from(ra_files, ra_random, ra_n, ra_side, ra_profile, c.seed, ra_pin);
    if (corpus.empty()) throw InputError("ratio needs --in, --random or --pinwheel");
    auto t = ratio_experiment(corpus, budget_or(c, 5'000'000));
    emit_text(ratio_csv(t), c.out);
    std::cerr << "max ratio " << to_string(t.max_ratio) << " (" << t.excluded << " incomplete excluded)\n";
  });

  // render -----------------------------------------------------------------
  auto* rd = app.add_subcommand("render", "SVG of a packing");
  common(rd);
  std::string rd_tree, rd_comps;
  bool rd_cuts = false;
  rd->add_option("--tree", rd_tree, "cut tree JSON")->check(CLI::ExistingFile);
  rd->add_flag("--cuts", rd_cuts, "compute and draw guillotine cuts");
  rd->add_option("--compartments", rd_comps, "compartment JSON")->check(CLI::ExistingFile);
  rd->callback([&] {
    Packing p = load_packing(c.in);
    if (!validate_packing(p).empty()) {
      std::cerr << "invalid packing\n";
      code = kInfeasible;
      return;
    }
    std::optional<GuillotineTree> t;
    if (!rd_tree.empty()) t = tree_from_json(read_json_file(rd_tree));
    else if (rd_cuts) {
      auto res = check_guillotine(p);
      if (auto* g = std::get_if<GuillotineTree>(&res)) t = *g;
      else code = kInfeasible;
    }
    std::optional<PseudoGuillotineTree> ct;
    if (!rd_comps.empty()) ct = pseudo_tree_from_json(read_json_file(rd_comps));
    emit_text(render_svg(p, t ? &*t : nullptr, ct ? &*ct : nullptr), c.out);
  });

  // bench ------------------------------------------------------------------
  auto* bn = app.add_subcommand("bench", "solver comparison as CSV");
  common(bn, false);
  std::vector<std::string> bn_files, solvers{"pipeline", "nfdh", "stages:2", "oracle"};
  int bn_random = 0, bn_n = 6, bn_trees = 100;
  Coord bn_side = 12;
  std::string bn_profile = "mixed";
  bool bn_pin = false;
  bn->add_option("--in", bn_files)->check(CLI::ExistingFile);
  bn->add_option("--random", bn_random);
  bn->add_option("-n,--count", bn_n);
  bn->add_option("-N,--side", bn_side);
  bn->add_option("--profile", bn_profile);
  bn->add_option("--solvers", solvers);
  bn->add_option("--max-trees", bn_trees);
  bn->add_flag("--pinwheel", bn_pin);
  bn->callback([&] {
    auto corpus = corpus_from(bn_files, bn_random, bn_n, bn_side, bn_profile, c.seed, bn_pin);
    if (corpus.empty()) throw InputError("bench needs --in, --random or --pinwheel");
    SolverConfig cfg;
    cfg.eps = parse_rational(c.eps);
    cfg.enumeration.max_trees = bn_trees;
    cfg.color.seed = c.seed;
    auto rows = run_bench(corpus, solvers, cfg, budget_or(c, 2'000'000));
    emit_text(bench_csv(rows), c.out);
    for (const auto& r : rows)
      if (!r.verified) code = kInfeasible;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad JSON: " << e.what() << '\n';
    return kBadInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return code;
}
