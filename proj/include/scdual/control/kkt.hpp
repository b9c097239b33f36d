#pragma once

#include <array>
#include <span>
#include <vector>

#include "scdual/control/problem.hpp"
#include "scdual/convex/plq.hpp"

namespace scdual {

/// Fenchel-equality residuals of the four optimality inclusions, with
/// q = Bᵀ·ᵒp:
///   (1) h(q) + h*(u) − u·q            u ∈ ∂h(q)
///   (2) (h*)^∞(s) − s·q               s in the normal cone of D at q
///   (3) g(ż) + g*(w) − w·ż            w ∈ ∂g(ż)
///   (4) e(ż_N) + e*(η) − η·ż_N        −p_T = η ∈ ∂e(ż_N)
/// Each is summed over coordinates; per-node (per-path for 4) values are
/// kept and the maxima reported.
struct KKTResiduals {
  std::array<double, 4> max{};
  std::vector<double> density;
  std::vector<double> singular;
  std::vector<double> state;
  std::vector<double> terminal;
  /// Σ P[m(r1 + r3) + r2] + Σ P r4, which equals primal + dual value.
  double weighted_sum = 0.0;

  double worst() const;
};

KKTResiduals kkt_check(const ControlProblem& prob, const ProblemData& data, const PrimalSolution& primal,
                       const DualSolution& dual);

struct HamiltonianEval {
  double value = 0.0;
  /// Minimum-norm minimizer of c ↦ h*(c) − (Bᵀp)·c, per coordinate.
  std::vector<double> argmin_density;
  /// Minimizers of the recession counterpart, per coordinate.
  std::vector<SubdiffInterval> argmin_recession;
  bool feasible = false;
};

/// g(z) + h*(c) − p·(Az + Bc + W) at `node`, with the minimizers in c.
HamiltonianEval hamiltonian(const ControlProblem& prob, const ProblemData& data, std::size_t node,
                            std::span<const double> z, std::span<const double> c, std::span<const double> p);

struct HamiltonianArgmin {
  std::vector<double> c;
  /// False when q leaves D; the minimization is then unbounded below.
  bool feasible = false;
};

/// argmin_c h*(c) − q·c through the inverse subdifferential of h*; ties go to
/// the minimum-norm point.
HamiltonianArgmin hamiltonian_argmin(const ControlProblem& prob, const ProblemData& data, std::size_t node,
                                     std::span<const double> q);

struct BKResiduals {
  /// max(0, max (ᵒp − D)).
  double feasibility = 0.0;
  /// Smallest control increment u·m + s.
  double min_increment = 0.0;
  /// |E Σ (D − ᵒp)·dc|.
  double complementarity = 0.0;
  /// Distance of p_t from −∂e(c_T) − Σ_{s ≥ t} m·∂g(c_s), largest over the
  /// tree; with g = −U and e = −U_T this is the representation through the
  /// marginal utilities.
  double representation = 0.0;
};

/// Requires the monotone follower shape: d = 1, A = 0, B = 1, h the indicator
/// of (−∞, D].
BKResiduals bk_conditions_check(const ControlProblem& prob, const PrimalSolution& primal, const DualSolution& dual);

}  // namespace scdual
