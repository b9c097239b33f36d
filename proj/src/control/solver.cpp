#include "scdual/control/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "scdual/control/dynamics.hpp"
#include "scdual/control/objectives.hpp"
#include "scdual/convex/calculus.hpp"
#include "scdual/kernels/kernels.hpp"

namespace scdual {

namespace {

// Flat layout: x = (u, s) with u(n,k) at n·d + k and s(n,k) after all u;
// rows = (ż at every node, ż at every leaf for e) with the same ordering.
struct Saddle {
  const ControlProblem& prob;
  const ProblemData& data;
  ZeroControl zero;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t node_rows = 0;
  std::vector<double> K;  // ny × nx, row-major
  std::vector<double> alpha, beta, shift, tau, sigma;
  std::vector<const PLQFunction*> row_f, col_f;

  Saddle(const ControlProblem& p, const ProblemData& d) : prob(p), data(d), zero(zero_control_trajectory(p)) {
    const auto& tree = prob.tree;
    const std::size_t dim = prob.dim;
    node_rows = tree.num_nodes() * dim;
    nx = 2 * node_rows;
    ny = node_rows + tree.num_paths() * dim;
    K.assign(ny * nx, 0.0);
    for (std::size_t j = 0; j < nx; ++j) {
      AdaptedProcess u(tree.num_nodes(), dim);
      AdaptedProcess s(tree.num_nodes(), dim);
      (j < node_rows ? u : s).data()[j % node_rows] = 1.0;
      const Trajectory tr = forward_dynamics(prob, u, s, false);
      for (std::size_t i = 0; i < ny; ++i) K[i * nx + j] = tr.zdot.data()[row_index(i)];
    }
    for (std::size_t i = 0; i < ny; ++i) {
      const std::size_t n = row_node(i);
      const std::size_t k = i % dim;
      if (i < node_rows) {
        alpha.push_back(tree.probability(n) * tree.mu(n));
        row_f.push_back(&prob.g[n][k]);
      } else {
        const std::size_t path = (i - node_rows) / dim;
        alpha.push_back(tree.path_probability(path));
        row_f.push_back(&prob.e[path][k]);
      }
      shift.push_back(zero.adot(n, k));
    }
    for (std::size_t j = 0; j < nx; ++j) {
      const std::size_t n = (j % node_rows) / dim;
      const std::size_t k = j % dim;
      if (j < node_rows) {
        beta.push_back(tree.probability(n) * tree.mu(n));
        col_f.push_back(&data.h_star[n][k]);
      } else {
        beta.push_back(tree.probability(n));
        col_f.push_back(&data.h_star_recession[n][k]);
      }
    }
    tau.assign(nx, 0.0);
    sigma.assign(ny, 0.0);
    for (std::size_t i = 0; i < ny; ++i) {
      for (std::size_t j = 0; j < nx; ++j) {
        const double a = std::abs(K[i * nx + j]);
        sigma[i] += a;
        tau[j] += a;
      }
    }
    for (double& t : tau) t = t > 0.0 ? 1.0 / t : 1.0;
    for (double& s : sigma) s = s > 0.0 ? 1.0 / s : 1.0;
  }

  // Index into the node-major ż data for row i.
  std::size_t row_index(std::size_t i) const {
    if (i < node_rows) return i;
    const std::size_t dim = prob.dim;
    const std::size_t path = (i - node_rows) / dim;
    return prob.tree.leaf(path) * dim + i % dim;
  }
  std::size_t row_node(std::size_t i) const { return row_index(i) / prob.dim; }

  AdaptedProcess part(const std::vector<double>& x, std::size_t offset) const {
    AdaptedProcess v(prob.tree.num_nodes(), prob.dim);
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(offset),
              x.begin() + static_cast<std::ptrdiff_t>(offset + node_rows), v.data().begin());
    return v;
  }

  // Multipliers (w, η) from unscaled row values.
  std::pair<AdaptedProcess, LeafValues> multipliers(const std::vector<double>& omega) const {
    AdaptedProcess w(prob.tree.num_nodes(), prob.dim);
    LeafValues eta(prob.tree.num_paths(), prob.dim);
    std::copy(omega.begin(), omega.begin() + static_cast<std::ptrdiff_t>(node_rows), w.data().begin());
    std::copy(omega.begin() + static_cast<std::ptrdiff_t>(node_rows), omega.end(), eta.data().begin());
    return {std::move(w), std::move(eta)};
  }
};

struct Candidate {
  PrimalSolution primal;
  DualSolution dual;
  KKTResiduals kkt;
  double gap = 0.0;
  double relative_gap = kInf;
  double violation = 0.0;
  double merit = kInf;
};

Candidate evaluate(const Saddle& sp, const std::vector<double>& x, const std::vector<double>& omega) {
  Candidate c;
  const AdaptedProcess u = sp.part(x, 0);
  const AdaptedProcess s = sp.part(x, sp.node_rows);
  const PrimalEvaluation pe = primal_objective(sp.prob, sp.data, u, s);
  c.violation = pe.violation;
  c.primal = make_primal_solution(sp.prob, sp.data, u, s);
  auto [w, eta] = sp.multipliers(omega);
  c.dual = make_dual_solution(sp.prob, sp.data, sp.zero, std::move(w), std::move(eta));
  c.kkt = kkt_check(sp.prob, sp.data, c.primal, c.dual);
  c.gap = c.primal.value + c.dual.value;
  c.relative_gap = std::abs(c.gap) / (1.0 + std::abs(c.primal.value));
  if (!std::isfinite(c.gap)) c.relative_gap = kInf;
  c.merit = std::max({c.relative_gap, c.kkt.worst(), c.dual.infeasibility, c.violation});
  if (std::isnan(c.merit)) c.merit = kInf;
  return c;
}

// One scalar optimality relation η ∈ ∂f(ξ), linearized on a segment of the
// graph of ∂f: either η − slope·ξ = offset, or ξ = knot with η in [lo, hi].
struct Segment {
  bool vertical = false;
  double slope = 0.0;
  double offset = 0.0;
  double xlo = -kInf;
  double xhi = kInf;
  double knot = 0.0;
  double ylo = -kInf;
  double yhi = kInf;
};

Segment nearest_segment(const PLQFunction& f, double xi, double eta) {
  Segment best;
  double best_d = kInf;
  const auto pieces = f.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double l = pieces[i].left;
    const double r = f.piece_right(i);
    if (!(l < r)) continue;
    const Quadratic& q = pieces[i].q;
    const double slope = 2.0 * q.a;
    const double x = std::clamp((xi + slope * (eta - q.b)) / (1.0 + slope * slope), l, r);
    const double dy = slope * x + q.b - eta;
    const double d = std::hypot(x - xi, dy);
    if (d < best_d) {
      best_d = d;
      best = Segment{false, slope, q.b, l, r, 0.0, -kInf, kInf};
    }
  }
  std::vector<double> knots = f.breakpoints();
  if (std::isfinite(f.lo())) knots.push_back(f.lo());
  if (std::isfinite(f.hi()) && f.hi() != f.lo()) knots.push_back(f.hi());
  for (double kappa : knots) {
    const double lo = f.left_derivative(kappa);
    const double hi = f.right_derivative(kappa);
    if (!(lo < hi)) continue;
    const double y = std::clamp(eta, lo, hi);
    const double d = std::hypot(kappa - xi, y - eta);
    if (d < best_d) {
      best_d = d;
      best = Segment{true, 0.0, 0.0, -kInf, kInf, kappa, lo, hi};
    }
  }
  return best;
}

bool on_segment(const Segment& s, double xi, double eta) {
  constexpr double tol = 1e-9;
  if (s.vertical) return eta >= s.ylo - tol * (1.0 + std::abs(eta)) && eta <= s.yhi + tol * (1.0 + std::abs(eta));
  return xi >= s.xlo - tol * (1.0 + std::abs(xi)) && xi <= s.xhi + tol * (1.0 + std::abs(xi));
}

// Unknowns z = (x, ω) with ω the unscaled multipliers. Relation values:
//   row i:    ξ = ȧ_i + (Kx)_i,  η = ω_i
//   column j: ξ = x_j,           η = q_j = −(Kᵀ α ω)_j / β_j
struct Polisher {
  const Saddle& sp;
  std::size_t nz;
  Eigen::MatrixXd xi_map, eta_map;  // relation × unknown
  Eigen::VectorXd xi_const;

  explicit Polisher(const Saddle& s) : sp(s), nz(s.nx + s.ny) {
    const auto rel = static_cast<Eigen::Index>(s.ny + s.nx);
    xi_map = Eigen::MatrixXd::Zero(rel, static_cast<Eigen::Index>(nz));
    eta_map = Eigen::MatrixXd::Zero(rel, static_cast<Eigen::Index>(nz));
    xi_const = Eigen::VectorXd::Zero(rel);
    for (std::size_t i = 0; i < s.ny; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      for (std::size_t j = 0; j < s.nx; ++j) xi_map(r, static_cast<Eigen::Index>(j)) = s.K[i * s.nx + j];
      xi_const(r) = s.shift[i];
      eta_map(r, static_cast<Eigen::Index>(s.nx + i)) = 1.0;
    }
    for (std::size_t j = 0; j < s.nx; ++j) {
      const auto r = static_cast<Eigen::Index>(s.ny + j);
      xi_map(r, static_cast<Eigen::Index>(j)) = 1.0;
      for (std::size_t i = 0; i < s.ny; ++i) {
        eta_map(r, static_cast<Eigen::Index>(s.nx + i)) = -s.K[i * s.nx + j] * s.alpha[i] / s.beta[j];
      }
    }
  }

  const PLQFunction& relation_f(std::size_t r) const { return r < sp.ny ? *sp.row_f[r] : *sp.col_f[r - sp.ny]; }

  // Returns false when no consistent active set is found.
  bool run(std::vector<double>& x, std::vector<double>& omega) const {
    Eigen::VectorXd z(static_cast<Eigen::Index>(nz));
    for (std::size_t j = 0; j < sp.nx; ++j) z(static_cast<Eigen::Index>(j)) = x[j];
    for (std::size_t i = 0; i < sp.ny; ++i) z(static_cast<Eigen::Index>(sp.nx + i)) = omega[i];
    const auto rel = static_cast<Eigen::Index>(nz);
    std::vector<Segment> segs(nz);
    for (int round = 0; round < 20; ++round) {
      Eigen::VectorXd xi = xi_map * z + xi_const;
      Eigen::VectorXd eta = eta_map * z;
      for (Eigen::Index r = 0; r < rel; ++r) {
        segs[static_cast<std::size_t>(r)] = nearest_segment(relation_f(static_cast<std::size_t>(r)), xi(r), eta(r));
      }
      Eigen::MatrixXd M(rel, rel);
      Eigen::VectorXd rhs(rel);
      for (Eigen::Index r = 0; r < rel; ++r) {
        const Segment& s = segs[static_cast<std::size_t>(r)];
        if (s.vertical) {
          M.row(r) = xi_map.row(r);
          rhs(r) = s.knot - xi_const(r);
        } else {
          M.row(r) = eta_map.row(r) - s.slope * xi_map.row(r);
          rhs(r) = s.offset + s.slope * xi_const(r);
        }
      }
      const Eigen::VectorXd residual = rhs - M * z;
      const Eigen::VectorXd delta = M.completeOrthogonalDecomposition().solve(residual);
      const Eigen::VectorXd next = z + delta;
      const double scale = 1.0 + rhs.cwiseAbs().maxCoeff() + next.cwiseAbs().maxCoeff();
      if (!next.allFinite() || (M * next - rhs).cwiseAbs().maxCoeff() > 1e-9 * scale) return false;
      z = next;
      xi = xi_map * z + xi_const;
      eta = eta_map * z;
      bool consistent = true;
      for (Eigen::Index r = 0; r < rel && consistent; ++r) {
        consistent = on_segment(segs[static_cast<std::size_t>(r)], xi(r), eta(r));
      }
      if (!consistent) continue;
      for (std::size_t j = 0; j < sp.nx; ++j) {
        const Segment& s = segs[sp.ny + j];
        x[j] = s.vertical ? s.knot : z(static_cast<Eigen::Index>(j));
      }
      for (std::size_t i = 0; i < sp.ny; ++i) omega[i] = z(static_cast<Eigen::Index>(sp.nx + i));
      return true;
    }
    return false;
  }
};

bool polish_due(std::size_t it) {
  if (it == 200) return true;
  for (std::size_t mark = 500; mark <= it; mark *= 2) {
    if (mark == it) return true;
  }
  return false;
}

}  // namespace

SolveResult solve(const ControlProblem& prob, const SolverOptions& options) {
  const ProblemData data = prepare(prob);
  const Saddle sp(prob, data);
  const Polisher polisher(sp);
  std::vector<double> x(sp.nx, 0.0), x_new(sp.nx), xbar(sp.nx), y(sp.ny, 0.0), kty(sp.nx), kx(sp.ny);

  const auto omega_of = [&](const std::vector<double>& yv) {
    std::vector<double> om(sp.ny);
    for (std::size_t i = 0; i < sp.ny; ++i) om[i] = yv[i] / sp.alpha[i];
    return om;
  };

  Candidate best = evaluate(sp, x, omega_of(y));
  SolveResult result;
  std::size_t it = 0;
  const auto try_polish = [&]() {
    if (!options.polish) return;
    ++result.polish_attempts;
    std::vector<double> px = x;
    std::vector<double> pom = omega_of(y);
    if (!polisher.run(px, pom)) return;
    Candidate c = evaluate(sp, px, pom);
    if (c.merit < best.merit) {
      best = std::move(c);
      result.polished = true;
      x = px;
      for (std::size_t i = 0; i < sp.ny; ++i) y[i] = pom[i] * sp.alpha[i];
    }
  };

  while (it < options.max_iterations && best.merit > options.target) {
    kernels::gemv_t(sp.K, sp.ny, sp.nx, y, kty);
    for (std::size_t j = 0; j < sp.nx; ++j) {
      x_new[j] = prox(*sp.col_f[j], sp.tau[j] * sp.beta[j], x[j] - sp.tau[j] * kty[j]);
      xbar[j] = 2.0 * x_new[j] - x[j];
    }
    x.swap(x_new);
    kernels::gemv(sp.K, sp.ny, sp.nx, xbar, kx);
    for (std::size_t i = 0; i < sp.ny; ++i) {
      const double sg = sp.sigma[i];
      const double v = y[i] + sg * kx[i];
      const double a = sp.shift[i];
      y[i] = v - sg * (prox(*sp.row_f[i], sp.alpha[i] / sg, v / sg + a) - a);
    }
    ++it;
    if (it % options.check_every == 0 || it == options.max_iterations) {
      Candidate c = evaluate(sp, x, omega_of(y));
      if (c.merit < best.merit) best = std::move(c);
    }
    if (polish_due(it) || it == options.max_iterations) try_polish();
  }

  result.primal = std::move(best.primal);
  result.dual = std::move(best.dual);
  result.kkt = std::move(best.kkt);
  result.gap = best.gap;
  result.relative_gap = best.relative_gap;
  result.primal_violation = best.violation;
  result.iterations = it;
  result.converged = best.relative_gap <= options.tol_gap && result.kkt.worst() <= options.tol_kkt &&
                     result.dual.infeasibility <= 1e-8 && result.primal_violation <= 1e-8;
  if (result.converged) {
    result.status = result.polished ? "converged (polished)" : "converged";
  } else {
    result.status = it >= options.max_iterations ? "iteration budget exhausted" : "not converged";
  }
  return result;
}

PrimalSolution solve_primal(const ControlProblem& prob, const SolverOptions& options) {
  return solve(prob, options).primal;
}

DualSolution solve_dual(const ControlProblem& prob, const SolverOptions& options) { return solve(prob, options).dual; }

}  // namespace scdual
