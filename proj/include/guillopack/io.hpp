#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "guillopack/core.hpp"
#include "guillopack/guillotine.hpp"

namespace guillopack {

using Json = nlohmann::json;

Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

/// The instance is inlined unless `instance_path` is non-empty.
Json packing_to_json(const Packing& p, const std::string& instance_path = {});
/// "instance" may be an inline object or a path relative to `base_dir`.
Packing packing_from_json(const Json& j, const std::filesystem::path& base_dir = {});

Json rect_to_json(const Rect& r);
Rect rect_from_json(const Json& j);

/// Nested {"region": [x0,y0,x1,y1], "cut": {...}, "children": [...]} form.
Json tree_to_json(const GuillotineTree& t);
GuillotineTree tree_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Instance load_instance(const std::filesystem::path& path);
Packing load_packing(const std::filesystem::path& path);

}  // namespace guillopack
