#include "scdual/stochastic/tree.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scdual {

namespace {

[[noreturn]] void reject(const std::string& what) { throw std::invalid_argument("invalid scenario tree: " + what); }

}  // namespace

ScenarioTree ScenarioTree::build(const std::vector<NodeSpec>& specs) {
  if (specs.empty()) reject("no nodes");
  ScenarioTree t;
  t.nodes_.resize(specs.size());
  bool have_root = false;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    TreeNode& n = t.nodes_[i];
    n.time = s.time;
    n.mu = s.mu;
    n.branch_prob = s.branch_prob;
    if (!(s.mu > 0.0) || !std::isfinite(s.mu)) reject("node " + std::to_string(i) + " needs a positive mu weight");
    if (!s.parent) {
      if (have_root) reject("more than one root");
      if (s.time != 0) reject("root must sit at time 0");
      have_root = true;
      t.root_ = i;
      n.branch_prob = 1.0;
      continue;
    }
    const std::size_t p = *s.parent;
    if (p >= specs.size() || p == i) reject("node " + std::to_string(i) + " has an unknown parent");
    if (specs[p].time + 1 != s.time) reject("node " + std::to_string(i) + " is not one step after its parent");
    if (!(s.branch_prob > 0.0) || s.branch_prob > 1.0 + 1e-12) {
      reject("node " + std::to_string(i) + " needs a branch probability in (0, 1]");
    }
    n.parent = p;
  }
  if (!have_root) reject("no root");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (t.nodes_[i].parent != kNoParent) t.nodes_[t.nodes_[i].parent].children.push_back(i);
  }

  // Depth-first traversal from the root assigns path ranges and probabilities.
  t.probability_.assign(specs.size(), 0.0);
  t.path_range_.assign(specs.size(), {0, 0});
  std::vector<bool> seen(specs.size(), false);
  std::size_t leaf_time = 0;
  bool leaf_time_set = false;
  std::vector<std::size_t> stack{t.root_};
  std::vector<std::size_t> trail;
  t.probability_[t.root_] = 1.0;
  // Iterative DFS with explicit exit handling to close path ranges.
  std::vector<std::pair<std::size_t, std::size_t>> frames{{t.root_, 0}};
  trail.push_back(t.root_);
  seen[t.root_] = true;
  t.path_range_[t.root_].first = 0;
  while (!frames.empty()) {
    auto& [id, next_child] = frames.back();
    const TreeNode& n = t.nodes_[id];
    if (n.children.empty()) {
      if (!leaf_time_set) {
        leaf_time = n.time;
        leaf_time_set = true;
      } else if (n.time != leaf_time) {
        reject("leaves must all sit at the same time index");
      }
      t.path_range_[id] = {t.leaves_.size(), t.leaves_.size() + 1};
      t.leaves_.push_back(id);
      for (std::size_t x : trail) t.paths_.push_back(x);
      frames.pop_back();
      trail.pop_back();
      continue;
    }
    if (next_child == 0) {
      double total = 0.0;
      for (std::size_t c : n.children) total += t.nodes_[c].branch_prob;
      if (std::abs(total - 1.0) > 1e-9) reject("branch probabilities at node " + std::to_string(id) + " do not sum to 1");
      t.path_range_[id].first = t.leaves_.size();
    }
    if (next_child < n.children.size()) {
      const std::size_t c = n.children[next_child++];
      if (seen[c]) reject("cycle detected");
      seen[c] = true;
      t.probability_[c] = t.probability_[id] * t.nodes_[c].branch_prob;
      trail.push_back(c);
      frames.push_back({c, 0});
      continue;
    }
    t.path_range_[id].second = t.leaves_.size();
    frames.pop_back();
    trail.pop_back();
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!seen[i]) reject("node " + std::to_string(i) + " is not reachable from the root");
  }
  t.periods_ = leaf_time;
  t.by_time_.assign(leaf_time + 1, {});
  for (std::size_t i = 0; i < specs.size(); ++i) t.by_time_[t.nodes_[i].time].push_back(i);
  return t;
}

ScenarioTree ScenarioTree::uniform(std::size_t periods, std::size_t branching, std::span<const double> mu_by_time) {
  if (branching == 0) reject("branching must be positive");
  if (mu_by_time.size() != periods + 1) reject("need one mu weight per time index");
  std::vector<NodeSpec> specs{{0, std::nullopt, 1.0, mu_by_time[0]}};
  std::vector<std::size_t> level{0};
  for (std::size_t t = 1; t <= periods; ++t) {
    std::vector<std::size_t> next;
    for (std::size_t p : level) {
      for (std::size_t b = 0; b < branching; ++b) {
        next.push_back(specs.size());
        specs.push_back({t, p, 1.0 / static_cast<double>(branching), mu_by_time[t]});
      }
    }
    level = std::move(next);
  }
  return build(specs);
}

ScenarioTree ScenarioTree::from_levels(const std::vector<std::vector<std::size_t>>& branching,
                                       const std::vector<std::vector<std::vector<double>>>& probs,
                                       const std::vector<std::vector<double>>& mu_by_level) {
  if (mu_by_level.size() != branching.size() + 1 || mu_by_level[0].size() != 1) reject("mu levels do not match");
  std::vector<NodeSpec> specs{{0, std::nullopt, 1.0, mu_by_level[0][0]}};
  std::vector<std::size_t> level{0};
  for (std::size_t t = 0; t < branching.size(); ++t) {
    if (branching[t].size() != level.size()) reject("branching level " + std::to_string(t) + " has the wrong size");
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const std::size_t k = branching[t][i];
      if (k == 0) reject("internal node without children");
      for (std::size_t b = 0; b < k; ++b) {
        double p = 1.0 / static_cast<double>(k);
        if (t < probs.size() && i < probs[t].size() && !probs[t][i].empty()) p = probs[t][i].at(b);
        const std::size_t idx = next.size();
        if (idx >= mu_by_level[t + 1].size()) reject("missing mu weight at level " + std::to_string(t + 1));
        next.push_back(specs.size());
        specs.push_back({t + 1, level[i], p, mu_by_level[t + 1][idx]});
      }
    }
    level = std::move(next);
  }
  return build(specs);
}

}  // namespace scdual
