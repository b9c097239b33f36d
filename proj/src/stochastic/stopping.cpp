#include "scdual/stochastic/stopping.hpp"

#include <cmath>
#include <stdexcept>

namespace scdual {

bool within_enumeration_cap(const ScenarioTree& tree) {
  return tree.periods() <= kEnumerationMaxPeriods && tree.num_paths() <= kEnumerationMaxLeaves;
}

bool is_stopping_time(const ScenarioTree& tree, const StoppingTime& tau) {
  if (tau.time_by_path.size() != tree.num_paths()) return false;
  const int last = static_cast<int>(tree.periods());
  for (int t : tau.time_by_path) {
    if (t != StoppingTime::kNever && (t < 0 || t > last)) return false;
  }
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const auto [first, end] = tree.path_range(n);
    const int i = static_cast<int>(tree.node(n).time);
    const auto stopped = [&](std::size_t p) {
      const int t = tau.time_by_path[p];
      return t != StoppingTime::kNever && t <= i;
    };
    const bool s = stopped(first);
    for (std::size_t p = first + 1; p < end; ++p) {
      if (stopped(p) != s) return false;
    }
  }
  return true;
}

namespace {

std::size_t count_from(const ScenarioTree& tree, std::size_t n) {
  const auto& node = tree.node(n);
  if (node.children.empty()) return 2;
  std::size_t prod = 1;
  for (std::size_t c : node.children) prod *= count_from(tree, c);
  return 1 + prod;
}

// Undecided nodes are kept in `pending`; each one either stops the paths
// through it or hands the decision to its children (a leaf may never stop).
void enumerate(const ScenarioTree& tree, std::vector<std::size_t>& pending, StoppingTime& tau,
               const std::function<void(const StoppingTime&)>& visit) {
  if (pending.empty()) {
    visit(tau);
    return;
  }
  const std::size_t n = pending.back();
  pending.pop_back();
  const auto [first, end] = tree.path_range(n);
  const int t = static_cast<int>(tree.node(n).time);
  for (std::size_t p = first; p < end; ++p) tau.time_by_path[p] = t;
  enumerate(tree, pending, tau, visit);
  const auto& children = tree.node(n).children;
  if (children.empty()) {
    tau.time_by_path[first] = StoppingTime::kNever;
    enumerate(tree, pending, tau, visit);
  } else {
    const std::size_t mark = pending.size();
    pending.insert(pending.end(), children.begin(), children.end());
    enumerate(tree, pending, tau, visit);
    pending.resize(mark);
  }
  pending.push_back(n);
}

}  // namespace

std::size_t count_stopping_times(const ScenarioTree& tree) { return count_from(tree, tree.root()); }

void for_each_stopping_time(const ScenarioTree& tree, const std::function<void(const StoppingTime&)>& visit) {
  if (!within_enumeration_cap(tree)) {
    throw std::length_error("stopping-time enumeration is limited to 4 periods and 16 leaves");
  }
  StoppingTime tau{std::vector<int>(tree.num_paths(), StoppingTime::kNever)};
  std::vector<std::size_t> pending{tree.root()};
  enumerate(tree, pending, tau, visit);
}

std::vector<StoppingTime> enumerate_stopping_times(const ScenarioTree& tree) {
  std::vector<StoppingTime> out;
  for_each_stopping_time(tree, [&](const StoppingTime& tau) { out.push_back(tau); });
  return out;
}

std::vector<double> stopped_expectation(const ScenarioTree& tree, const RawProcess& v, const StoppingTime& tau) {
  std::vector<double> out(v.dim(), 0.0);
  for (std::size_t p = 0; p < tree.num_paths(); ++p) {
    const int t = tau.time_by_path[p];
    if (t == StoppingTime::kNever) continue;
    const double w = tree.path_probability(p);
    const auto x = v.at(p, static_cast<std::size_t>(t));
    for (std::size_t k = 0; k < v.dim(); ++k) out[k] += w * x[k];
  }
  return out;
}

double stopped_abs_expectation(const ScenarioTree& tree, const AdaptedProcess& v, const StoppingTime& tau) {
  double total = 0.0;
  for (std::size_t p = 0; p < tree.num_paths(); ++p) {
    const int t = tau.time_by_path[p];
    if (t == StoppingTime::kNever) continue;
    double a = 0.0;
    for (double x : v.at(tree.path_node(p, static_cast<std::size_t>(t)))) a += std::abs(x);
    total += tree.path_probability(p) * a;
  }
  return total;
}

double r1_norm_by_enumeration(const ScenarioTree& tree, const AdaptedProcess& v) {
  double best = 0.0;
  for_each_stopping_time(tree, [&](const StoppingTime& tau) { best = std::max(best, stopped_abs_expectation(tree, v, tau)); });
  return best;
}

}  // namespace scdual
