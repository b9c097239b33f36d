#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "scdual/stochastic/process.hpp"
#include "scdual/stochastic/tree.hpp"

namespace scdual {

/// Time index at which each leaf-path stops; kNever means the path is never
/// stopped (the stopped value is then zero).
struct StoppingTime {
  static constexpr int kNever = -1;
  std::vector<int> time_by_path;
};

/// Enumeration is refused above these sizes.
inline constexpr std::size_t kEnumerationMaxPeriods = 4;
inline constexpr std::size_t kEnumerationMaxLeaves = 16;

bool within_enumeration_cap(const ScenarioTree& tree);

/// {τ ≤ i} must be a union of time-i nodes: paths sharing a node at time i
/// either both stop by i or neither does.
bool is_stopping_time(const ScenarioTree& tree, const StoppingTime& tau);

/// Number of stopping times, by the recursion S(leaf) = 2, S(n) = 1 + Π S(child).
std::size_t count_stopping_times(const ScenarioTree& tree);

/// Calls `visit` once per stopping time. Throws std::length_error above the cap.
void for_each_stopping_time(const ScenarioTree& tree, const std::function<void(const StoppingTime&)>& visit);
std::vector<StoppingTime> enumerate_stopping_times(const ScenarioTree& tree);

/// E[v_τ] per coordinate.
std::vector<double> stopped_expectation(const ScenarioTree& tree, const RawProcess& v, const StoppingTime& tau);
/// E|v_τ| with |x| = Σ|x_k|.
double stopped_abs_expectation(const ScenarioTree& tree, const AdaptedProcess& v, const StoppingTime& tau);

/// sup_τ E|v_τ| by brute force over all stopping times.
double r1_norm_by_enumeration(const ScenarioTree& tree, const AdaptedProcess& v);

}  // namespace scdual
