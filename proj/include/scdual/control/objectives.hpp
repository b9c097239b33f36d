#pragma once

#include "scdual/control/dynamics.hpp"
#include "scdual/control/problem.hpp"

namespace scdual {

/// Points outside a domain by at most this relative amount are evaluated at
/// the nearest domain end; the excess is reported as a violation.
inline constexpr double kBoundaryTol = 1e-9;

struct PrimalEvaluation {
  double value = 0.0;
  Trajectory trajectory;
  /// Largest distance of a control from the domain of its cost term.
  double violation = 0.0;
};

/// E[Σ m g(ż) + e(ż_N) + Σ m h*(u) + Σ (h*)^∞(s)] with z from forward_dynamics.
PrimalEvaluation primal_objective(const ControlProblem& prob, const ProblemData& data, const AdaptedProcess& u,
                                  const AdaptedProcess& s);

struct DualEvaluation {
  double value = 0.0;
  Adjoint adjoint;
  /// Largest distance of Bᵀ·ᵒp from the box D.
  double infeasibility = 0.0;
};

/// E[Σ m g̃*(w) + ẽ*(η) + Σ m h(Bᵀ·ᵒp)] with g̃*(w) = g*(w) − w·ȧ and
/// ẽ*(η) = e*(η) − η·ȧ_N, p from adjoint_dynamics.
DualEvaluation dual_objective(const ControlProblem& prob, const ProblemData& data, const ZeroControl& zero,
                              const AdaptedProcess& w, const LeafValues& eta);

PrimalSolution make_primal_solution(const ControlProblem& prob, const ProblemData& data, AdaptedProcess u,
                                    AdaptedProcess s);
DualSolution make_dual_solution(const ControlProblem& prob, const ProblemData& data, const ZeroControl& zero,
                                AdaptedProcess w, LeafValues eta);

}  // namespace scdual
