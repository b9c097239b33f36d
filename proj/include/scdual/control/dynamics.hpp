#pragma once

#include "scdual/control/problem.hpp"

namespace scdual {

struct Trajectory {
  AdaptedProcess c;
  AdaptedProcess z;
  AdaptedProcess zdot;
};

/// Explicit one-step recursion: c_n = c_parent + u_n·m_n + s_n,
/// ż_n = A z_n + B c_n + W_n, z_child = z_n + m_n·ż_n, z_root = 0.
/// With `with_disturbance` false, W is treated as zero (the linear part).
Trajectory forward_dynamics(const ControlProblem& prob, const AdaptedProcess& u, const AdaptedProcess& s,
                            bool with_disturbance = true);

struct ZeroControl {
  AdaptedProcess a;
  AdaptedProcess adot;
};

/// The uncontrolled trajectory a and its rate ȧ = A a + W.
ZeroControl zero_control_trajectory(const ControlProblem& prob);

struct Adjoint {
  /// p per (path, time index).
  RawProcess p;
  AdaptedProcess op;
  /// Bᵀ·ᵒp per node.
  AdaptedProcess q;
  /// p_T = −η per path.
  LeafValues terminal;
};

/// Transpose of the forward map along each path:
///   p_N = −η − m_N·w_N,   p_j = (I + m_j·Aᵀ)·p_{j+1} − m_j·w_j.
/// With these, E[Σ m w·ż⁰ + η·ż⁰_N] = E[Σ (−Bᵀ·ᵒp)·(u·m + s)] for the
/// disturbance-free response ż⁰ of any control (u, s).
Adjoint adjoint_dynamics(const ControlProblem& prob, const AdaptedProcess& w, const LeafValues& eta);

struct PairingSides {
  double state_side = 0.0;
  double control_side = 0.0;
  double residual = 0.0;
};

PairingSides pairing_sides(const ControlProblem& prob, const AdaptedProcess& u, const AdaptedProcess& s,
                           const AdaptedProcess& w, const LeafValues& eta);

/// |state side − control side| of the pairing identity above.
double pairing_identity_check(const ControlProblem& prob, const AdaptedProcess& u, const AdaptedProcess& s,
                              const AdaptedProcess& w, const LeafValues& eta);

}  // namespace scdual
