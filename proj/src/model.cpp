#include "treemap/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace treemap {

using nlohmann::json;

std::vector<int> Hierarchy::leaves() const {
  std::vector<int> out;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (is_leaf(n)) {
      out.push_back(n);
      continue;
    }
    for (auto it = children[n].rbegin(); it != children[n].rend(); ++it) stack.push_back(*it);
  }
  return out;
}

int Hierarchy::lca_depth(int a, int b) const {
  while (depth[a] > depth[b]) a = parent[a];
  while (depth[b] > depth[a]) b = parent[b];
  while (a != b) {
    a = parent[a];
    b = parent[b];
  }
  return depth[a];
}

bool Hierarchy::is_ancestor(int ancestor, int node) const {
  while (node != -1 && depth[node] > depth[ancestor]) node = parent[node];
  return node == ancestor;
}

int Hierarchy::find(std::string_view id) const {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return static_cast<int>(i);
  return -1;
}

Hierarchy Hierarchy::flat(const std::vector<std::string>& leaf_ids, std::string root_id) {
  Hierarchy h;
  h.ids.push_back(std::move(root_id));
  h.parent.push_back(-1);
  h.children.emplace_back();
  for (const auto& id : leaf_ids) {
    int n = static_cast<int>(h.ids.size());
    h.ids.push_back(id);
    h.parent.push_back(0);
    h.children.emplace_back();
    h.children[0].push_back(n);
  }
  h.root = 0;
  h.finalize();
  return h;
}

void Hierarchy::finalize() {
  depth.assign(ids.size(), 0);
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    for (int c : children[n]) {
      depth[c] = depth[n] + 1;
      stack.push_back(c);
    }
  }
}

double TimeVaryingTree::weight(int node, int t) const {
  const auto& h = *hierarchy;
  if (h.is_leaf(node)) return weights[node][t];
  double sum = 0.0;
  for (int c : h.children[node]) sum += weight(c, t);
  return sum;
}

std::vector<int> TimeVaryingTree::alive_leaves(int t) const {
  std::vector<int> out;
  for (int leaf : hierarchy->leaves())
    if (weights[leaf][t] > 0.0) out.push_back(leaf);
  return out;
}

void TimeVaryingTree::validate() const {
  if (!hierarchy) throw DatasetError("dataset has no hierarchy");
  const auto& h = *hierarchy;
  if (num_timesteps <= 0) throw DatasetError("num_timesteps must be positive");
  if (weights.size() != h.size()) throw DatasetError("weight table does not match node count");
  for (std::size_t n = 0; n < h.size(); ++n) {
    if (h.is_leaf(static_cast<int>(n))) {
      if (weights[n].size() != static_cast<std::size_t>(num_timesteps))
        throw DatasetError("weight sequence length mismatch for node '" + h.ids[n] + "'");
      for (double w : weights[n])
        if (!(w >= 0.0) || !std::isfinite(w))
          throw DatasetError("negative or non-finite weight for node '" + h.ids[n] + "'");
    } else if (!weights[n].empty()) {
      throw DatasetError("internal node '" + h.ids[n] + "' carries weights");
    }
  }
  for (int t = 0; t < num_timesteps; ++t)
    if (!(total_weight(t) > 0.0))
      throw DatasetError("all-zero timestep " + std::to_string(t));
}

TimeVaryingTree parse_dataset(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DatasetError(std::string("malformed dataset JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
    throw DatasetError("malformed dataset: expected object with a 'nodes' array");
  if (!doc.contains("num_timesteps") || !doc["num_timesteps"].is_number_integer())
    throw DatasetError("malformed dataset: 'num_timesteps' must be an integer");

  TimeVaryingTree tree;
  tree.name = doc.value("name", std::string{});
  tree.num_timesteps = doc["num_timesteps"].get<int>();
  if (tree.num_timesteps <= 0) throw DatasetError("num_timesteps must be positive");

  auto h = std::make_shared<Hierarchy>();
  std::unordered_map<std::string, int> index;
  std::vector<std::string> parent_ids;
  std::vector<bool> has_parent;
  std::vector<const json*> weight_fields;

  for (const auto& node : doc["nodes"]) {
    if (!node.is_object() || !node.contains("id") || !node["id"].is_string())
      throw DatasetError("malformed dataset: node without string 'id'");
    std::string id = node["id"].get<std::string>();
    if (!index.emplace(id, static_cast<int>(h->ids.size())).second)
      throw DatasetError("duplicate id '" + id + "'");
    h->ids.push_back(id);
    const auto parent = node.find("parent");
    if (parent == node.end() || parent->is_null()) {
      parent_ids.emplace_back();
      has_parent.push_back(false);
    } else if (parent->is_string()) {
      parent_ids.push_back(parent->get<std::string>());
      has_parent.push_back(true);
    } else {
      throw DatasetError("malformed dataset: 'parent' of '" + id + "' must be a string or null");
    }
    const auto w = node.find("weights");
    weight_fields.push_back(w == node.end() || w->is_null() ? nullptr : &*w);
  }

  const std::size_t count = h->ids.size();
  if (count == 0) throw DatasetError("dataset has no nodes");
  h->parent.assign(count, -1);
  h->children.assign(count, {});
  int root = -1;
  for (std::size_t n = 0; n < count; ++n) {
    if (!has_parent[n]) {
      if (root != -1) throw DatasetError("multiple roots ('" + h->ids[root] + "', '" + h->ids[n] + "')");
      root = static_cast<int>(n);
      continue;
    }
    auto it = index.find(parent_ids[n]);
    if (it == index.end())
      throw DatasetError("unknown parent '" + parent_ids[n] + "' of '" + h->ids[n] + "'");
    h->parent[n] = it->second;
    h->children[it->second].push_back(static_cast<int>(n));
  }
  if (root == -1) throw DatasetError("no root node");
  h->root = root;

  // Reachability from the root rules out cycles among the remaining nodes.
  std::vector<bool> seen(count, false);
  std::vector<int> stack{root};
  std::size_t reached = 0;
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (seen[n]) throw DatasetError("cycle in hierarchy");
    seen[n] = true;
    ++reached;
    for (int c : h->children[n]) stack.push_back(c);
  }
  if (reached != count) throw DatasetError("cycle in hierarchy: nodes unreachable from root");
  h->finalize();

  tree.weights.assign(count, {});
  for (std::size_t n = 0; n < count; ++n) {
    const json* w = weight_fields[n];
    if (h->is_leaf(static_cast<int>(n))) {
      if (!w || !w->is_array()) throw DatasetError("leaf '" + h->ids[n] + "' has no weights array");
      if (w->size() != static_cast<std::size_t>(tree.num_timesteps))
        throw DatasetError("weight sequence length mismatch for leaf '" + h->ids[n] + "'");
      for (const auto& v : *w) {
        if (!v.is_number()) throw DatasetError("non-numeric weight for leaf '" + h->ids[n] + "'");
        tree.weights[n].push_back(v.get<double>());
      }
    } else if (w) {
      throw DatasetError("internal node '" + h->ids[n] + "' carries weights");
    }
  }
  tree.hierarchy = std::move(h);
  tree.validate();
  return tree;
}

TimeVaryingTree load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open dataset file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str());
}

std::string serialize_dataset(const TimeVaryingTree& tree) {
  const auto& h = *tree.hierarchy;
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < h.size(); ++n) {
    nlohmann::ordered_json node;
    node["id"] = h.ids[n];
    node["parent"] = h.parent[n] < 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(h.ids[h.parent[n]]);
    if (h.is_leaf(static_cast<int>(n))) node["weights"] = tree.weights[n];
    nodes.push_back(std::move(node));
  }
  nlohmann::ordered_json doc;
  doc["name"] = tree.name;
  doc["num_timesteps"] = tree.num_timesteps;
  doc["nodes"] = std::move(nodes);
  return doc.dump();
}

void save_dataset(const TimeVaryingTree& tree, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot write dataset file '" + path + "'");
  out << serialize_dataset(tree) << '\n';
}

NormalizedStep normalize_step(const TimeVaryingTree& tree, int t, double rect_area) {
  if (t < 0 || t >= tree.num_timesteps) throw DatasetError("timestep out of range");
  const auto& h = *tree.hierarchy;
  const double total = tree.total_weight(t);
  if (!(total > 0.0)) throw DatasetError("total weight is zero at timestep " + std::to_string(t));

  NormalizedStep step;
  step.timestep = t;
  step.total_area = rect_area;
  step.area.assign(h.size(), 0.0);
  const double scale = rect_area / total;
  for (int leaf : h.leaves()) {
    double a = tree.weights[leaf][t] * scale;
    step.area[leaf] = a;
    for (int p = h.parent[leaf]; p != -1; p = h.parent[p]) step.area[p] += a;
  }
  // Pin the root to the exact rectangle area; leaf proportions are unchanged.
  step.area[h.root] = rect_area;
  return step;
}

}  // namespace treemap
