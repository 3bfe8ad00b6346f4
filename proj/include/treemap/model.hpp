#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treemap {

/// Raised for malformed or invariant-violating dataset input.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time-independent hierarchy. Nodes are addressed by dense indices; the
/// children of each node keep the dataset order.
struct Hierarchy {
  std::vector<std::string> ids;
  std::vector<int> parent;  // -1 for the root
  std::vector<std::vector<int>> children;
  std::vector<int> depth;   // root has depth 0
  int root = 0;

  std::size_t size() const { return ids.size(); }
  bool is_leaf(int node) const { return children[node].empty(); }

  /// Leaves in pre-order (dataset order).
  std::vector<int> leaves() const;

  /// Depth of the lowest common ancestor of two nodes.
  int lca_depth(int a, int b) const;

  bool is_ancestor(int ancestor, int node) const;

  /// Returns -1 when no node carries this id.
  int find(std::string_view id) const;

  /// A root with one leaf child per id, in the given order.
  static Hierarchy flat(const std::vector<std::string>& leaf_ids,
                        std::string root_id = "root");

  /// Computes depth from parent/children; used by constructors above.
  void finalize();
};

/// A hierarchy whose leaves carry one weight per discrete time step.
/// Internal node weights are derived as sums and never stored.
struct TimeVaryingTree {
  std::string name;
  int num_timesteps = 0;
  std::shared_ptr<const Hierarchy> hierarchy;
  std::vector<std::vector<double>> weights;  // per node, empty for internal nodes

  /// Leaf weight, or the sum over descendant leaves for internal nodes.
  double weight(int node, int t) const;
  bool alive(int node, int t) const { return weight(node, t) > 0.0; }
  double total_weight(int t) const { return weight(hierarchy->root, t); }
  std::vector<int> alive_leaves(int t) const;

  /// Throws DatasetError when an invariant does not hold.
  void validate() const;
};

/// Areas of all nodes at one time step, scaled so that the root area equals
/// the area of the input rectangle. Dead nodes map to zero.
struct NormalizedStep {
  int timestep = 0;
  double total_area = 0.0;
  std::vector<double> area;  // per node; internal nodes hold subtree sums

  bool alive(int node) const { return area[node] > 0.0; }
};

TimeVaryingTree parse_dataset(std::string_view json_text);
TimeVaryingTree load_dataset(const std::string& path);

/// Canonical JSON form: keys name, num_timesteps, nodes; nodes in input
/// order with keys id, parent, weights; compact separators.
std::string serialize_dataset(const TimeVaryingTree& tree);
void save_dataset(const TimeVaryingTree& tree, const std::string& path);

NormalizedStep normalize_step(const TimeVaryingTree& tree, int t, double rect_area);

}  // namespace treemap
