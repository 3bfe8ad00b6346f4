#include "treemap/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace treemap {

using ojson = nlohmann::ordered_json;

namespace {

ojson rect_fields(ojson obj, const Rect& r) {
  obj["x"] = r.x;
  obj["y"] = r.y;
  obj["w"] = r.w;
  obj["h"] = r.h;
  return obj;
}

ojson layout_object(const Layout& layout) {
  ojson out;
  out["bounds"] = {layout.bounds.x, layout.bounds.y, layout.bounds.w, layout.bounds.h};
  ojson cells = ojson::array(), groups = ojson::array();
  for (const auto& c : layout.cells) cells.push_back(rect_fields({{"id", layout.name_of(c.id)}}, c.rect));
  for (const auto& g : layout.groups) groups.push_back(rect_fields({{"id", layout.name_of(g.id)}}, g.rect));
  out["cells"] = std::move(cells);
  out["groups"] = std::move(groups);
  return out;
}

}  // namespace

std::string layout_to_json(const Layout& layout, std::string_view algorithm, int timestep) {
  ojson out;
  out["algorithm"] = std::string(algorithm);
  out["timestep"] = timestep;
  ojson body = layout_object(layout);
  for (auto& [k, v] : body.items()) out[k] = v;
  return out.dump(1);
}

Layout layout_from_json(std::string_view text, std::shared_ptr<const Hierarchy> hierarchy) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw DatasetError(std::string("malformed layout JSON: ") + e.what());
  }
  Layout layout;
  layout.hierarchy = hierarchy;
  const auto& b = j.at("bounds");
  layout.bounds = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()};
  for (const auto& c : j.at("cells")) {
    auto id = c.at("id").get<std::string>();
    int node = hierarchy->find(id);
    if (node < 0 || !hierarchy->is_leaf(node)) throw DatasetError("layout cell '" + id + "' is not a leaf");
    layout.cells.push_back({node, {c.at("x").get<double>(), c.at("y").get<double>(), c.at("w").get<double>(),
                                   c.at("h").get<double>()}});
  }
  layout.rebuild_groups();
  return layout;
}

std::string baseline_to_json(const BaselineResult& result, int from_timestep, int to_timestep) {
  ojson out;
  out["from_timestep"] = from_timestep;
  out["to_timestep"] = to_timestep;
  ojson body = layout_object(result.baseline);
  for (auto& [k, v] : body.items()) out[k] = v;
  ojson walls = ojson::array();
  for (const auto& w : result.walls) walls.push_back(rect_fields(ojson::object(), w));
  out["walls"] = std::move(walls);
  ojson deleted = ojson::array(), inserted = ojson::array();
  for (int id : result.deleted) deleted.push_back(result.baseline.name_of(id));
  for (int id : result.inserted) inserted.push_back(result.baseline.name_of(id));
  out["deleted"] = std::move(deleted);
  out["inserted"] = std::move(inserted);
  out["converged"] = result.converged;
  out["max_rel_area_error"] = result.max_rel_area_error;
  out["iterations"] = result.iterations;
  return out.dump(1);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace treemap
