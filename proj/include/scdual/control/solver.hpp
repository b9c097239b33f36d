#pragma once

#include <cstddef>
#include <string>

#include "scdual/control/kkt.hpp"
#include "scdual/control/problem.hpp"

namespace scdual {

struct SolverOptions {
  std::size_t max_iterations = 50000;
  std::size_t check_every = 50;
  /// Relative duality gap |primal + dual| / (1 + |primal|) for convergence.
  double tol_gap = 1e-5;
  double tol_kkt = 1e-5;
  /// Early exit once the gap, KKT residuals and infeasibilities fall below it.
  double target = 1e-10;
  bool polish = true;
};

struct SolveResult {
  PrimalSolution primal;
  DualSolution dual;
  KKTResiduals kkt;
  /// primal value + dual value.
  double gap = 0.0;
  double relative_gap = 0.0;
  /// Largest domain violation of the primal controls (tolerated up to 1e-9
  /// relative at domain ends).
  double primal_violation = 0.0;
  std::size_t iterations = 0;
  std::size_t polish_attempts = 0;
  bool polished = false;
  bool converged = false;
  std::string status;
};

/// Solves the primal and dual problems jointly as one saddle problem:
/// diagonally preconditioned primal-dual proximal iterations over the
/// controls (u, s) and the multipliers (w, η), using exact PLQ proxes, with
/// periodic active-set polishing on the piecewise-linear optimality graph.
/// Values are recomputed from the returned iterates: the primal through the
/// forward recursion, the dual through the adjoint recursion. Starts at 0.
SolveResult solve(const ControlProblem& prob, const SolverOptions& options = {});

PrimalSolution solve_primal(const ControlProblem& prob, const SolverOptions& options = {});
DualSolution solve_dual(const ControlProblem& prob, const SolverOptions& options = {});

}  // namespace scdual
