#include "scdual/functionals/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scdual/convex/calculus.hpp"
#include "scdual/kernels/kernels.hpp"
#include "scdual/stochastic/stopping.hpp"

namespace scdual {

FunctionalInstance FunctionalInstance::make(ScenarioTree tree, std::vector<SeparableIntegrand> h) {
  if (h.size() != tree.num_nodes()) throw std::invalid_argument("functional instance: need one integrand per node");
  FunctionalInstance inst;
  const std::size_t d = h.empty() ? 0 : h.front().dim();
  if (d == 0) throw std::invalid_argument("functional instance: zero dimension");
  for (std::size_t n = 0; n < h.size(); ++n) {
    if (h[n].dim() != d) throw std::invalid_argument("functional instance: dimension differs across nodes");
    if (!h[n].proper()) throw std::invalid_argument("functional instance: improper integrand at node " + std::to_string(n));
    inst.h_star.push_back(h[n].conjugate());
    inst.h_star_recession.push_back(inst.h_star.back().recession());
    inst.boxes.push_back(h[n].box());
  }
  inst.tree = std::move(tree);
  inst.h = std::move(h);
  return inst;
}

double EI(const FunctionalInstance& inst, const AdaptedProcess& v) {
  if (v.rows() != inst.tree.num_nodes() || v.dim() != inst.dim()) throw std::invalid_argument("EI: shape mismatch");
  double total = 0.0;
  for (std::size_t n = 0; n < inst.tree.num_nodes(); ++n) {
    const double value = inst.h[n](v.at(n));
    if (value == kInf) return kInf;
    total += inst.tree.probability(n) * inst.tree.mu(n) * value;
  }
  return total;
}

double EJ(const FunctionalInstance& inst, const RandomMeasure& theta) {
  return J_functional(inst.tree, inst.h_star, theta, inst.h_star_recession);
}

FenchelGapReport fenchel_gap(const FunctionalInstance& inst, const AdaptedProcess& v, const RandomMeasure& theta) {
  FenchelGapReport r;
  r.ei = EI(inst, v);
  r.j = EJ(inst, theta);
  if (r.ei == kInf || r.j == kInf) throw std::domain_error("fenchel_gap: infinite functional value");
  r.pairing = pairing(inst.tree, v, theta);
  r.gap = r.ei + r.j - r.pairing;
  const std::size_t nodes = inst.tree.num_nodes();
  r.density_residual.assign(nodes, 0.0);
  r.atom_residual.assign(nodes, 0.0);
  r.density_gap.assign(nodes, 0.0);
  r.atom_gap.assign(nodes, 0.0);
  for (std::size_t n = 0; n < nodes; ++n) {
    for (std::size_t k = 0; k < inst.dim(); ++k) {
      const double x = v(n, k);
      const double y = theta.density(n, k);
      const double a = theta.atoms(n, k);
      r.density_residual[n] = std::max(r.density_residual[n], subdifferential(inst.h[n][k], x).distance(y));
      const Interval box = inst.boxes[n][k];
      r.atom_residual[n] = std::max(r.atom_residual[n], normal_cone(box, x).distance(a));
      r.density_gap[n] += inst.tree.mu(n) * (inst.h[n][k](x) + inst.h_star[n][k](y) - x * y);
      r.atom_gap[n] += inst.h_star_recession[n][k](a) - x * a;
    }
    r.worst_density = std::max(r.worst_density, r.density_residual[n]);
    r.worst_atom = std::max(r.worst_atom, r.atom_residual[n]);
  }
  return r;
}

namespace {

double truncation_radius(const PLQFunction& f) {
  double big = 0.0;
  for (double b : f.breakpoints()) big = std::max(big, std::abs(b));
  if (std::isfinite(f.lo())) big = std::max(big, std::abs(f.lo()));
  if (std::isfinite(f.hi())) big = std::max(big, std::abs(f.hi()));
  return 10.0 * (1.0 + big);
}

Interval truncated_box(const PLQFunction& f) {
  const double r = truncation_radius(f);
  return {std::isfinite(f.lo()) ? f.lo() : -r, std::isfinite(f.hi()) ? f.hi() : r};
}

// Largest value of scale·(t·x − f(x)) + atom·x over the grid lo + jΔ, j = 0..n.
double slot_grid_max(const PLQFunction& f, Interval box, std::size_t n, double scale, double t, double atom) {
  if (box.lo == box.hi) return scale * (t * box.lo - f(box.lo)) + atom * box.lo;
  const double dx = (box.hi - box.lo) / static_cast<double>(n);
  double best = -kInf;
  const auto pieces = f.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double l = std::max(pieces[i].left, box.lo);
    const double r = std::min(f.piece_right(i), box.hi);
    if (l > r) continue;
    const double fl = std::ceil((l - box.lo) / dx - 1e-9);
    const double fr = std::floor((r - box.lo) / dx + 1e-9);
    const auto j0 = static_cast<std::size_t>(std::max(0.0, fl));
    const auto j1 = static_cast<std::size_t>(std::min(static_cast<double>(n), fr));
    if (j0 > j1) continue;
    const Quadratic& q = pieces[i].q;
    const auto m = kernels::quadratic_grid_max(-scale * q.a, scale * (t - q.b) + atom, -scale * q.c, box.lo, dx, j0, j1);
    best = std::max(best, m.value);
  }
  return best;
}

}  // namespace

BruteForceConjugate conjugate_bruteforce(const FunctionalInstance& inst, const RandomMeasure& theta, GridSpec grid) {
  if (!within_enumeration_cap(inst.tree)) throw std::length_error("conjugate_bruteforce: tree exceeds the enumeration cap");
  if (grid.intervals == 0) throw std::invalid_argument("conjugate_bruteforce: empty grid");
  if (EJ(inst, theta) == kInf) throw std::domain_error("conjugate_bruteforce: J is infinite");
  BruteForceConjugate out;
  const double n = static_cast<double>(grid.intervals);
  for (std::size_t node = 0; node < inst.tree.num_nodes(); ++node) {
    const double p = inst.tree.probability(node);
    const double m = inst.tree.mu(node);
    for (std::size_t k = 0; k < inst.dim(); ++k) {
      const PLQFunction& f = inst.h[node][k];
      const Interval box = truncated_box(f);
      out.largest_radius = std::max(out.largest_radius, truncation_radius(f));
      const double t = theta.density(node, k);
      const double a = theta.atoms(node, k);
      out.value += p * slot_grid_max(f, box, grid.intervals, m, t, 0.0);
      out.value += p * slot_grid_max(PLQFunction::indicator(f.domain()), box, grid.intervals, 0.0, 0.0, a);
      out.shared_value += p * slot_grid_max(f, box, grid.intervals, m, t, a);

      if (box.lo == box.hi) continue;
      // Both slots are concave on the box with slopes bounded by L (the atom
      // slot is linear), so each grid maximum is within L·Δ/2 of the true one
      // as long as a maximizer lies in the truncated box.
      const SubdiffInterval argmax = inverse_subdifferential(f, t);
      const bool inside = !argmax.empty && argmax.hi >= box.lo && argmax.lo <= box.hi;
      if (!inside) out.resolution_bound = kInf;
      const double slope_lo = f.right_derivative(box.lo);
      const double slope_hi = f.left_derivative(box.hi);
      const double lipschitz = m * std::max(std::abs(t - slope_lo), std::abs(t - slope_hi)) + std::abs(a);
      out.resolution_bound += (p * lipschitz * (box.hi - box.lo) * 0.5) / n;
    }
  }
  return out;
}

InterchangeResult interchange_check(std::span<const PLQFunction> fs, std::span<const double> weights) {
  if (fs.size() != weights.size() || fs.empty()) throw std::invalid_argument("interchange_check: size mismatch");
  InterchangeResult r;
  double via_conjugate = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) throw std::invalid_argument("interchange_check: bad weight");
    if (!fs[i].proper()) throw std::invalid_argument("interchange_check: improper function");
    Minimum m{};
    try {
      m = minimize(fs[i]);
    } catch (const std::domain_error&) {
      throw std::invalid_argument("interchange_check: function " + std::to_string(i) + " is unbounded below");
    }
    r.value += weights[i] * fs[i](m.argmin.min_norm());
    via_conjugate += weights[i] * -conjugate(fs[i])(0.0);
  }
  r.residual = std::abs(r.value - via_conjugate);
  return r;
}

AdaptedProcess properness_witness(const FunctionalInstance& inst) {
  AdaptedProcess v(inst.tree.num_nodes(), inst.dim());
  for (std::size_t n = 0; n < inst.tree.num_nodes(); ++n) {
    for (std::size_t k = 0; k < inst.dim(); ++k) {
      const PLQFunction& f = inst.h[n][k];
      try {
        v(n, k) = minimize(f).argmin.min_norm();
      } catch (const std::domain_error&) {
        v(n, k) = f.domain().clamp(0.0);
      }
    }
  }
  return v;
}

CertificateCheck check_regularity_certificate(const FunctionalInstance& inst, const AdaptedProcess& v_bar,
                                              const AdaptedProcess& x_bar, std::span<const double> alpha) {
  if (alpha.size() != inst.tree.num_nodes()) throw std::invalid_argument("certificate: need one alpha per node");
  CertificateCheck c;
  c.worst_conjugate_excess = -kInf;
  c.worst_primal_excess = -kInf;
  for (std::size_t n = 0; n < inst.tree.num_nodes(); ++n) {
    c.worst_conjugate_excess = std::max(c.worst_conjugate_excess, inst.h_star[n](x_bar.at(n)) - alpha[n]);
    c.worst_primal_excess = std::max(c.worst_primal_excess, inst.h[n](v_bar.at(n)) - alpha[n]);
  }
  c.ok = c.worst_conjugate_excess <= 0.0 && c.worst_primal_excess <= 0.0;
  return c;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// A finite point of the (possibly unbounded) interval s, spread over up to
// `reach` beyond a finite end.
double point_in(std::mt19937_64& rng, SubdiffInterval s, double reach) {
  const double lo = std::isfinite(s.lo) ? s.lo : s.hi - reach;
  const double hi = std::isfinite(s.hi) ? s.hi : s.lo + reach;
  if (!std::isfinite(lo) || !std::isfinite(hi)) return uniform(rng, -reach, reach);
  return lo == hi ? lo : uniform(rng, lo, hi);
}

double box_point(std::mt19937_64& rng, const PLQFunction& f, double end_prob) {
  const Interval box = truncated_box(f);
  const bool lo_end = std::isfinite(f.lo());
  const bool hi_end = std::isfinite(f.hi());
  if ((lo_end || hi_end) && coin(rng, end_prob)) {
    if (lo_end && hi_end) return coin(rng, 0.5) ? f.lo() : f.hi();
    return lo_end ? f.lo() : f.hi();
  }
  return box.lo == box.hi ? box.lo : uniform(rng, box.lo, box.hi);
}

}  // namespace

ZeroGapPair random_zero_gap_pair(std::mt19937_64& rng, const FunctionalInstance& inst) {
  const std::size_t d = inst.dim();
  ZeroGapPair z{AdaptedProcess(inst.tree.num_nodes(), d), zero_measure(inst.tree, d)};
  for (std::size_t n = 0; n < inst.tree.num_nodes(); ++n) {
    for (std::size_t k = 0; k < d; ++k) {
      const PLQFunction& f = inst.h[n][k];
      const double x = box_point(rng, f, 0.4);
      z.v(n, k) = x;
      z.theta.density(n, k) = point_in(rng, subdifferential(f, x), 2.0);
      const SubdiffInterval cone = normal_cone(inst.boxes[n][k], x);
      z.theta.atoms(n, k) = coin(rng, 0.7) ? point_in(rng, cone, 2.0) : 0.0;
    }
  }
  return z;
}

bool perturb_outside_inclusions(std::mt19937_64& rng, const FunctionalInstance& inst, const AdaptedProcess& v,
                                RandomMeasure& theta, double step) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, inst.tree.num_nodes() - 1)(rng);
  const std::size_t k = std::uniform_int_distribution<std::size_t>(0, inst.dim() - 1)(rng);
  const double x = v(n, k);
  struct Move {
    bool atom;
    double value;
  };
  std::vector<Move> moves;
  const SubdiffInterval s = subdifferential(inst.h[n][k], x);
  if (std::isfinite(s.hi)) moves.push_back({false, s.hi + step});
  if (std::isfinite(s.lo)) moves.push_back({false, s.lo - step});
  const SubdiffInterval c = normal_cone(inst.boxes[n][k], x);
  if (std::isfinite(c.hi)) moves.push_back({true, c.hi + step});
  if (std::isfinite(c.lo)) moves.push_back({true, c.lo - step});
  std::shuffle(moves.begin(), moves.end(), rng);
  for (const Move& mv : moves) {
    const PLQFunction& cost = mv.atom ? inst.h_star_recession[n][k] : inst.h_star[n][k];
    if (cost(mv.value) == kInf) continue;
    (mv.atom ? theta.atoms : theta.density)(n, k) = mv.value;
    return true;
  }
  return false;
}

RandomMeasure random_finite_measure(std::mt19937_64& rng, const FunctionalInstance& inst) {
  const std::size_t d = inst.dim();
  RandomMeasure theta = zero_measure(inst.tree, d);
  for (std::size_t n = 0; n < inst.tree.num_nodes(); ++n) {
    for (std::size_t k = 0; k < d; ++k) {
      const PLQFunction& f = inst.h[n][k];
      const double x = box_point(rng, f, 0.2);
      theta.density(n, k) = point_in(rng, subdifferential(f, x), 1.0);
      const Interval box = inst.boxes[n][k];
      SubdiffInterval atoms{box.lo == -kInf ? 0.0 : -2.0, box.hi == kInf ? 0.0 : 2.0, false};
      theta.atoms(n, k) = coin(rng, 0.6) ? point_in(rng, atoms, 2.0) : 0.0;
    }
  }
  return theta;
}

ScenarioTree random_tree(std::mt19937_64& rng, const RandomTreeOptions& options) {
  const std::size_t periods = std::uniform_int_distribution<std::size_t>(1, options.max_periods)(rng);
  std::vector<ScenarioTree::NodeSpec> specs{{0, std::nullopt, 1.0, uniform(rng, options.mu_lo, options.mu_hi)}};
  std::vector<std::size_t> level{0};
  for (std::size_t t = 1; t <= periods; ++t) {
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      // Keep the eventual leaf count within the cap assuming the later
      // levels stay unbranched.
      const std::size_t others = next.size() + (level.size() - i - 1);
      const std::size_t room = options.max_leaves > others ? options.max_leaves - others : 1;
      const std::size_t hi = std::max<std::size_t>(1, std::min(options.max_branching, room));
      const std::size_t k = std::uniform_int_distribution<std::size_t>(1, hi)(rng);
      std::vector<double> w(k);
      double total = 0.0;
      for (double& x : w) total += (x = uniform(rng, 0.2, 1.0));
      for (std::size_t b = 0; b < k; ++b) {
        next.push_back(specs.size());
        specs.push_back({t, level[i], w[b] / total, uniform(rng, options.mu_lo, options.mu_hi)});
      }
    }
    level = std::move(next);
  }
  return ScenarioTree::build(specs);
}

}  // namespace scdual
