#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace scdual {

inline constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

struct TreeNode {
  std::size_t time = 0;
  std::size_t parent = kNoParent;
  double branch_prob = 1.0;  // conditional probability given the parent
  double mu = 1.0;           // reference-measure weight carried by the node
  std::vector<std::size_t> children;
};

/// A finite filtered probability space: a rooted tree whose leaves all sit at
/// the final time index. Leaf-paths are numbered in depth-first order, so the
/// paths through any node form a contiguous range.
class ScenarioTree {
 public:
  struct NodeSpec {
    std::size_t time;
    std::optional<std::size_t> parent;
    double branch_prob;
    double mu;
  };

  ScenarioTree() = default;

  /// Node ids are positions in `nodes`. Throws std::invalid_argument when the
  /// specification is not a valid scenario tree.
  static ScenarioTree build(const std::vector<NodeSpec>& nodes);

  /// Every node at time t < periods has `branching` equally likely children.
  /// `mu_by_time` holds periods + 1 weights.
  static ScenarioTree uniform(std::size_t periods, std::size_t branching, std::span<const double> mu_by_time);

  /// Children per node given level by level: `branching[t][i]` is the child
  /// count of the i-th node at time t, with branch probabilities taken from
  /// `probs[t][i]` (empty means equal).
  static ScenarioTree from_levels(const std::vector<std::vector<std::size_t>>& branching,
                                  const std::vector<std::vector<std::vector<double>>>& probs,
                                  const std::vector<std::vector<double>>& mu_by_level);

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_paths() const { return leaves_.size(); }
  /// Number of transitions; times run 0..periods().
  std::size_t periods() const { return periods_; }
  std::size_t root() const { return root_; }

  const TreeNode& node(std::size_t id) const { return nodes_[id]; }
  std::span<const TreeNode> nodes() const { return nodes_; }
  double probability(std::size_t id) const { return probability_[id]; }
  double mu(std::size_t id) const { return nodes_[id].mu; }
  bool is_leaf(std::size_t id) const { return nodes_[id].children.empty(); }

  std::span<const std::size_t> nodes_at(std::size_t time) const { return by_time_[time]; }
  /// Node visited by `path` at `time`.
  std::size_t path_node(std::size_t path, std::size_t time) const { return paths_[path * (periods_ + 1) + time]; }
  std::span<const std::size_t> path(std::size_t path) const {
    return std::span<const std::size_t>(paths_).subspan(path * (periods_ + 1), periods_ + 1);
  }
  std::size_t leaf(std::size_t path) const { return leaves_[path]; }
  double path_probability(std::size_t path) const { return probability_[leaves_[path]]; }
  /// Leaf-path index of a leaf node.
  std::size_t path_of_leaf(std::size_t leaf_node) const { return path_range_[leaf_node].first; }
  /// Half-open range of leaf-paths passing through `id`.
  std::pair<std::size_t, std::size_t> path_range(std::size_t id) const { return path_range_[id]; }

 private:
  std::vector<TreeNode> nodes_;
  std::vector<double> probability_;
  std::vector<std::vector<std::size_t>> by_time_;
  std::vector<std::size_t> paths_;
  std::vector<std::size_t> leaves_;
  std::vector<std::pair<std::size_t, std::size_t>> path_range_;
  std::size_t periods_ = 0;
  std::size_t root_ = 0;
};

}  // namespace scdual
