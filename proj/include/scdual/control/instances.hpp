#pragma once

#include <optional>
#include <random>

#include "scdual/control/problem.hpp"

namespace scdual {

/// h*(c) = c² for |c| ≤ k/2 and k|c| − k²/4 beyond; h = y²/4 on [−k, k].
PLQFunction ls_cost(double k);

/// d = 1, g = ½·r·z², e ≡ 0, B = 1, A = 0 unless given, h = conjugate of the
/// cost above. k = 0 is accepted and noted as degenerate (h is the indicator
/// of {0}).
ControlProblem build_ls_instance(double r, double k, ScenarioTree tree, AdaptedProcess W,
                                 std::optional<double> A = std::nullopt);

/// d = 1, A = 0, B = 1, W = 0, g = −U per node, e = −U_T per path,
/// h = indicator of (−∞, D] per node. `neg_U` and `neg_UT` are the convex
/// functions −U and −U_T. Rejects negative D.
ControlProblem build_bk_instance(std::vector<PLQFunction> neg_U, std::vector<PLQFunction> neg_UT,
                                 const AdaptedProcess& D, ScenarioTree tree);

/// −U for the capped quadratic utility U(c) = α(c − c²/2) for c ≤ 1 and α/2
/// beyond.
PLQFunction capped_quadratic_disutility(double alpha);

/// Three periods, binary branching, equal probabilities, μ = 1/4 per node.
ScenarioTree default_demo_tree();

/// r = 1, k = 2 on the demo tree with a symmetric ±1 disturbance.
ControlProblem ls_demo();
/// Random per-node utility scale, decreasing deterministic D.
ControlProblem bk_demo(std::uint64_t seed = 0);

struct RandomControlOptions {
  std::size_t max_dim = 2;
  std::size_t max_periods = 3;
  std::size_t max_branching = 2;
  std::size_t max_leaves = 8;
};

/// Small random instance: A small, B near the identity, W random, g strongly
/// convex and e convex (both finite everywhere), h random on a bounded box
/// with 0 inside.
ControlProblem random_control_instance(std::mt19937_64& rng, const RandomControlOptions& options = {});

}  // namespace scdual
