// Python extension. Values cross the boundary as JSON text in the same
// formats the CLI reads and writes; guillopack/__init__.py turns them into
// dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

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

namespace py = pybind11;
using namespace guillopack;

namespace {

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad JSON: ") + e.what());
  }
}

std::shared_ptr<const Instance> instance_of(const std::string& text) {
  Json j = parse(text);
  if (j.contains("placements")) return packing_from_json(j).instance_ptr();
  return std::make_shared<const Instance>(instance_from_json(j));
}

std::optional<ClassThresholds> thresholds_of(const std::string& eps, const std::optional<std::string>& large,
                                             const std::optional<std::string>& small) {
  if (!large && !small) return std::nullopt;
  if (!large || !small) throw InputError("eps_large and eps_small go together");
  ClassThresholds t{parse_rational(eps), parse_rational(*large), parse_rational(*small)};
  t.validate();
  return t;
}

std::string check(const std::string& packing) {
  Packing p = packing_from_json(parse(packing));
  auto vs = validate_packing(p);
  Json r{{"valid", vs.empty()}, {"items", p.size()}, {"profit", profit(p)}, {"separable", false}};
  if (!vs.empty()) return r.dump();
  auto res = check_guillotine(p);
  r["separable"] = is_separable(res);
  if (auto* t = std::get_if<GuillotineTree>(&res)) {
    r["stages"] = stage_count(*t).stages;
    r["tree"] = tree_to_json(*t);
  }
  return r.dump();
}

std::string solve(const std::string& instance, const std::string& eps, const std::optional<std::string>& compartments,
                  const std::string& mode, std::uint64_t seed, const std::optional<std::string>& eps_large,
                  const std::optional<std::string>& eps_small, int max_trees) {
  auto inst = instance_of(instance);
  SolverConfig cfg;
  cfg.eps = parse_rational(eps);
  cfg.thresholds = thresholds_of(eps, eps_large, eps_small);
  cfg.mode = parse_skewed_mode(mode);
  cfg.color.seed = seed;
  cfg.enumeration.max_trees = max_trees;
  SolveResult r;
  {
    py::gil_scoped_release nogil;
    r = compartments ? solve_cardinality(inst, pseudo_tree_from_json(parse(*compartments)), cfg)
                     : solve_enumerated(inst, cfg);
  }
  Json stats{{"skewed_path", r.stats.skewed_path},
             {"trees_evaluated", r.stats.trees_evaluated},
             {"enumeration_truncated", r.stats.enumeration_truncated},
             {"gap_fell_back", r.stats.gap_fell_back}};
  return Json{{"packing", packing_to_json(r.packing)},
              {"tree", tree_to_json(r.tree)},
              {"compartments", pseudo_tree_to_json(r.compartments)},
              {"stats", stats}}
      .dump();
}

std::string oracle(const std::string& instance, const std::string& flavor, std::int64_t budget) {
  auto inst = instance_of(instance);
  auto f = parse_flavor(flavor);
  OracleResult r;
  {
    py::gil_scoped_release nogil;
    r = oracle_exact(inst, f, budget);
  }
  return Json{{"packing", packing_to_json(r.packing)},
              {"value", r.value},
              {"complete", r.complete},
              {"expansions", r.expansions}}
      .dump();
}

std::string nfdh(const std::string& instance) {
  auto inst = instance_of(instance);
  const Coord n = inst->side();
  auto r = nfdh_pack(inst->items(), Rect{0, 0, n, n});
  return Json{{"packing", packing_to_json(Packing::from_placed(inst, r.placed))}, {"tree", tree_to_json(r.tree)}}
      .dump();
}

std::string lpack(const std::string& instance, Coord h_wide, Coord w_tall, const std::string& objective) {
  auto inst = instance_of(instance);
  LRegion reg{inst->side(), h_wide, w_tall};
  LSolution s;
  if (objective == "cardinality") s = solve_l_cardinality(inst->items(), reg);
  else if (objective == "profit") s = solve_l_profit_smalln(inst->items(), reg);
  else throw InputError("objective must be cardinality or profit");
  return packing_to_json(Packing::from_placed(inst, s.placement)).dump();
}

std::string classify_items(const std::string& instance, const std::string& eps,
                           const std::optional<std::string>& large, const std::optional<std::string>& small) {
  auto inst = instance_of(instance);
  auto fixed = thresholds_of(eps, large, small);
  ClassThresholds t = fixed ? *fixed : choose_thresholds(*inst, parse_rational(eps)).chosen;
  Json per = Json::object();
  for (const auto& it : inst->items()) per[std::to_string(it.id)] = to_string(classify(it, t, inst->side()).cls);
  return Json{{"thresholds",
               {{"eps", to_string(t.eps)}, {"eps_large", to_string(t.eps_large)}, {"eps_small", to_string(t.eps_small)}}},
              {"items", per}}
      .dump();
}

std::string compose(const std::string& compartments, const std::string& instance, const std::string& fillings) {
  auto tree = pseudo_tree_from_json(parse(compartments));
  auto inst = instance_of(instance);
  auto f = fillings_from_json(parse(fillings), tree, *inst);
  auto comp = compose_pseudo(tree, f, inst, NiceContext{Rational(1, 2), std::nullopt, inst->side()});
  return Json{{"packing", packing_to_json(comp.packing)}, {"tree", tree_to_json(comp.tree)}}.dump();
}

std::string render(const std::string& packing, bool cuts) {
  Packing p = packing_from_json(parse(packing));
  if (!cuts) return render_svg(p);
  auto res = check_guillotine(p);
  return render_svg(p, std::get_if<GuillotineTree>(&res));
}

std::string ratio(const std::vector<std::string>& instances, std::int64_t budget) {
  std::vector<NamedInstance> corpus;
  for (std::size_t i = 0; i < instances.size(); ++i) corpus.push_back({std::to_string(i), instance_of(instances[i])});
  RatioTable t;
  {
    py::gil_scoped_release nogil;
    t = ratio_experiment(corpus, budget);
  }
  Json rows = Json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"free", r.free}, {"guillotine", r.guillotine}, {"ratio", to_string(r.ratio)}, {"complete", r.complete}});
  return Json{{"rows", rows}, {"max_ratio", to_string(t.max_ratio)}, {"excluded", t.excluded}}.dump();
}

}  // namespace

PYBIND11_MODULE(_guillopack, m) {
  m.doc() = "guillotine two-dimensional knapsack core";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("check", &check, py::arg("packing"));
  m.def("solve", &solve, py::arg("instance"), py::arg("eps") = "1/3", py::arg("compartments") = std::nullopt,
        py::arg("mode") = "auto", py::arg("seed") = 1, py::arg("eps_large") = std::nullopt,
        py::arg("eps_small") = std::nullopt, py::arg("max_trees") = 400);
  m.def("oracle", &oracle, py::arg("instance"), py::arg("flavor") = "guillotine", py::arg("budget") = 50'000'000);
  m.def("nfdh", &nfdh, py::arg("instance"));
  m.def("lpack", &lpack, py::arg("instance"), py::arg("h_wide"), py::arg("w_tall"),
        py::arg("objective") = "cardinality");
  m.def("classify", &classify_items, py::arg("instance"), py::arg("eps") = "1/3", py::arg("eps_large") = std::nullopt,
        py::arg("eps_small") = std::nullopt);
  m.def("compose", &compose, py::arg("compartments"), py::arg("instance"), py::arg("fillings"));
  m.def("render_svg", &render, py::arg("packing"), py::arg("cuts") = true);
  m.def("ratio", &ratio, py::arg("instances"), py::arg("budget") = 5'000'000);
  m.def("gen_hard", [](int k) { return packing_to_json(gen_hard_family(k).packing).dump(); }, py::arg("k"));
  m.def(
      "gen_random",
      [](int n, Coord side, const std::string& profile, std::uint64_t seed, bool unit) {
        return instance_to_json(gen_random(n, side, parse_profile(profile), seed, unit)).dump();
      },
      py::arg("n"), py::arg("side"), py::arg("profile") = "mixed", py::arg("seed") = 1, py::arg("unit_profit") = false);
  m.def("pinwheel", [] { return packing_to_json(pinwheel()).dump(); });
}
