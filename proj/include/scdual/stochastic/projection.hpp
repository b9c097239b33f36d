#pragma once

#include <vector>

#include "scdual/convex/separable.hpp"
#include "scdual/stochastic/process.hpp"
#include "scdual/stochastic/stopping.hpp"
#include "scdual/stochastic/tree.hpp"

namespace scdual {

/// Node value = probability-weighted average of v(path, time(node)) over the
/// leaf-paths through the node.
AdaptedProcess optional_projection(const ScenarioTree& tree, const RawProcess& v);

/// Leaf integrands indexed [path][time].
using LeafIntegrands = std::vector<std::vector<SeparableIntegrand>>;

/// Nodewise expectation of the leaf integrands through each node. A node
/// whose coordinate domains do not intersect gets an improper coordinate;
/// callers check SeparableIntegrand::proper().
std::vector<SeparableIntegrand> project_integrand(const ScenarioTree& tree, const LeafIntegrands& h);

/// True when paths sharing a node carry the same value there (within tol).
bool is_adapted(const ScenarioTree& tree, const RawProcess& v, double tol = 0.0);

/// The adapted process read off an adapted raw process. Throws
/// std::invalid_argument when v is not adapted.
AdaptedProcess to_adapted(const ScenarioTree& tree, const RawProcess& v, double tol = 0.0);

/// sup_τ E|v_τ| through the Snell envelope of |v| (ℓ¹ across coordinates).
double r1_norm(const ScenarioTree& tree, const AdaptedProcess& v);

/// Snell envelope values per node.
std::vector<double> snell_envelope(const ScenarioTree& tree, std::span<const double> reward);

/// max_k |E[v_τ]_k − E[(ᵒv)_τ]_k|.
double verify_projection_identity(const ScenarioTree& tree, const RawProcess& v, const StoppingTime& tau);

}  // namespace scdual
