#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scdual/convex/separable.hpp"
#include "scdual/stochastic/process.hpp"
#include "scdual/stochastic/tree.hpp"

namespace scdual {

/// Optional random measure on the tree: a density with respect to the node
/// weights μ plus a singular atom per node.
struct RandomMeasure {
  AdaptedProcess density;
  AdaptedProcess atoms;

  std::size_t dim() const { return density.dim(); }
};

RandomMeasure zero_measure(const ScenarioTree& tree, std::size_t dim);

/// E[Σ v·density·m + Σ v·atom].
double pairing(const ScenarioTree& tree, const AdaptedProcess& v, const RandomMeasure& theta);

/// Pairing for a process with a separate value at each node's atom instant.
double refined_pairing(const ScenarioTree& tree, const AdaptedProcess& v_density, const AdaptedProcess& v_atom,
                       const RandomMeasure& theta);

/// max over leaf-paths of Σ (‖density‖∞·m + ‖atom‖∞). For d = 1 this is the
/// path total variation; for d > 1 the ∞-norm is the dual of the ℓ¹
/// aggregation used by r1_norm.
double m_inf_norm(const ScenarioTree& tree, const RandomMeasure& theta);

/// sup_τ E|v_τ| where every node contributes two instants, the density instant
/// followed by the atom instant, with the same information.
double refined_r1_norm(const ScenarioTree& tree, const AdaptedProcess& v_density, const AdaptedProcess& v_atom);

struct ExtremePointResult {
  double value = 0.0;
  std::size_t candidates = 0;
  std::size_t feasible = 0;
  AdaptedProcess v_density;
  AdaptedProcess v_atom;
};

/// max of the refined pairing over the unit ball of refined_r1_norm, by
/// enumerating the extreme points of the ball: scaled indicators of chains of
/// instants along a single path. Each candidate is checked for feasibility
/// with refined_r1_norm. Throws std::length_error above the enumeration cap.
ExtremePointResult dual_norm_by_extreme_points(const ScenarioTree& tree, const RandomMeasure& theta);

/// E[Σ h*(density)·m + Σ (h*)^∞(atom)]; +inf dominates. `h_star_recession`
/// may be empty, in which case it is computed from `h_star`.
double J_functional(const ScenarioTree& tree, std::span<const SeparableIntegrand> h_star, const RandomMeasure& theta,
                    std::span<const SeparableIntegrand> h_star_recession = {});

/// Cumulative control split into its absolutely continuous and singular
/// parts. The value at a node includes that node's increment.
struct CumulativePath {
  AdaptedProcess absolutely_continuous;
  AdaptedProcess singular;

  AdaptedProcess total() const;
};

RandomMeasure bv_to_measure(const ScenarioTree& tree, const CumulativePath& c);
/// Raw cumulative paths; rejected unless both parts are adapted.
RandomMeasure bv_to_measure(const ScenarioTree& tree, const RawProcess& absolutely_continuous,
                            const RawProcess& singular);
CumulativePath measure_to_path(const ScenarioTree& tree, const RandomMeasure& theta);

}  // namespace scdual
