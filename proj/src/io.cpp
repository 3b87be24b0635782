#include "guillopack/io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace guillopack {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

Json instance_to_json(const Instance& inst) {
  Json items = Json::array();
  for (const auto& it : inst.items())
    items.push_back({{"id", it.id}, {"w", it.width}, {"h", it.height}, {"p", it.profit}});
  return {{"N", inst.side()}, {"allow_rotation", inst.allow_rotation()}, {"items", items}};
}

Instance instance_from_json(const Json& j) {
  Coord n = field<Coord>(j, "N");
  bool rot = j.contains("allow_rotation") ? field<bool>(j, "allow_rotation") : false;
  std::vector<Item> items;
  const Json& arr = j.contains("items") ? j.at("items") : Json::array();
  if (!arr.is_array()) throw InputError("'items' must be an array");
  for (const auto& e : arr) {
    Item it;
    it.id = field<int>(e, "id");
    it.width = field<Coord>(e, "w");
    it.height = field<Coord>(e, "h");
    it.profit = e.contains("p") ? field<Profit>(e, "p") : 1;
    items.push_back(it);
  }
  return Instance(n, std::move(items), rot);
}

Json packing_to_json(const Packing& p, const std::string& instance_path) {
  Json pl = Json::array();
  for (const auto& x : p.placements())
    pl.push_back({{"id", x.item_id}, {"x", x.x}, {"y", x.y}, {"rot", x.rotated}});
  Json inst = instance_path.empty() ? instance_to_json(p.instance()) : Json(instance_path);
  return {{"instance", inst}, {"placements", pl}};
}

Packing packing_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("instance")) throw InputError("packing lacks 'instance'");
  std::shared_ptr<const Instance> inst;
  const Json& ij = j.at("instance");
  if (ij.is_string()) {
    std::filesystem::path p = ij.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    inst = std::make_shared<const Instance>(load_instance(p));
  } else {
    inst = std::make_shared<const Instance>(instance_from_json(ij));
  }
  std::vector<Placement> ps;
  const Json& arr = j.contains("placements") ? j.at("placements") : Json::array();
  if (!arr.is_array()) throw InputError("'placements' must be an array");
  for (const auto& e : arr) {
    Placement p;
    p.item_id = field<int>(e, "id");
    p.x = field<Coord>(e, "x");
    p.y = field<Coord>(e, "y");
    p.rotated = e.contains("rot") ? field<bool>(e, "rot") : false;
    ps.push_back(p);
  }
  return Packing(inst, std::move(ps));
}

Json rect_to_json(const Rect& r) { return Json::array({r.x0, r.y0, r.x1, r.y1}); }

Rect rect_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw InputError("rect must be [x0,y0,x1,y1]");
  Rect r{j[0].get<Coord>(), j[1].get<Coord>(), j[2].get<Coord>(), j[3].get<Coord>()};
  if (!r.nondegenerate()) throw InputError("degenerate rect");
  return r;
}

Json tree_to_json(const GuillotineTree& t) {
  std::function<Json(int)> dump = [&](int i) {
    const auto& n = t.node(i);
    Json out{{"region", rect_to_json(n.region)}};
    if (n.is_leaf()) {
      out["cut"] = nullptr;
      out["item"] = n.item_id ? Json(*n.item_id) : Json(nullptr);
    } else {
      out["cut"] = {{"orientation", *n.cut == Orientation::Horizontal ? "horizontal" : "vertical"},
                    {"position", n.position}};
      out["children"] = Json::array({dump(n.low), dump(n.high)});
    }
    return out;
  };
  return dump(t.root());
}

GuillotineTree tree_from_json(const Json& j) {
  GuillotineTree t(rect_from_json(field<Json>(j, "region")));
  std::function<void(const Json&, int)> load = [&](const Json& node, int idx) {
    if (!(t.node(idx).region == rect_from_json(field<Json>(node, "region"))))
      throw InputError("tree node region does not match its parent's split");
    const Json& cut = node.contains("cut") ? node.at("cut") : Json(nullptr);
    if (cut.is_null()) {
      if (node.contains("item") && !node.at("item").is_null()) t.assign_item(idx, node.at("item").get<int>());
      return;
    }
    std::string o = field<std::string>(cut, "orientation");
    if (o != "horizontal" && o != "vertical") throw InputError("bad cut orientation '" + o + "'");
    const Json& ch = field<Json>(node, "children");
    if (!ch.is_array() || ch.size() != 2) throw InputError("cut node needs two children");
    try {
      auto [lo, hi] = t.split(idx, o == "horizontal" ? Orientation::Horizontal : Orientation::Vertical,
                              field<Coord>(cut, "position"));
      load(ch[0], lo);
      load(ch[1], hi);
    } catch (const std::logic_error& e) {
      throw InputError(e.what());
    }
  };
  load(j, t.root());
  return t;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

Instance load_instance(const std::filesystem::path& path) { return instance_from_json(read_json_file(path)); }

Packing load_packing(const std::filesystem::path& path) {
  Json j = read_json_file(path);
  // A bare instance file is accepted as an empty packing.
  if (j.is_object() && j.contains("N") && !j.contains("placements"))
    return Packing(std::make_shared<const Instance>(instance_from_json(j)));
  return packing_from_json(j, path.parent_path());
}

}  // namespace guillopack
