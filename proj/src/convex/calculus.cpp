#include "scdual/convex/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scdual {

namespace {

using Piece = PLQFunction::Piece;

void require_proper(const PLQFunction& f, const char* op) {
  if (!f.proper()) throw std::invalid_argument(std::string(op) + ": improper function");
}

bool close_coef(double x, double y) {
  return std::abs(x - y) <= 1e-12 * (1.0 + std::max(std::abs(x), std::abs(y)));
}

double midpoint(double l, double r) {
  if (l == -kInf && r == kInf) return 0.0;
  if (l == -kInf) return r - 1.0;
  if (r == kInf) return l + 1.0;
  return 0.5 * (l + r);
}

Quadratic sum(const Quadratic& p, const Quadratic& q) { return {p.a + q.a, p.b + q.b, p.c + q.c}; }

}  // namespace

double evaluate_near(const PLQFunction& f, double x, double tol) {
  if (!f.proper()) return kInf;
  if (x < f.lo() && f.lo() - x <= tol * (1.0 + std::abs(x))) return f(f.lo());
  if (x > f.hi() && x - f.hi() <= tol * (1.0 + std::abs(x))) return f(f.hi());
  return f(x);
}

PLQFunction normalize(const PLQFunction& f) {
  if (!f.proper() || f.size() < 2) return f;
  std::vector<Piece> out;
  for (const auto& p : f.pieces()) {
    if (!out.empty()) {
      const auto& q = out.back().q;
      if (close_coef(q.a, p.q.a) && close_coef(q.b, p.q.b) && close_coef(q.c, p.q.c)) continue;
    }
    out.push_back(p);
  }
  return PLQFunction::from_pieces(f.lo(), f.hi(), std::move(out));
}

PLQFunction conjugate(const PLQFunction& input) {
  require_proper(input, "conjugate");
  const PLQFunction f = normalize(input);
  const double lo = f.lo();
  const double hi = f.hi();
  const auto ps = f.pieces();
  if (lo == hi) {
    return PLQFunction::affine(lo, -f(lo));
  }

  struct Element {
    double ylo;
    double yhi;
    Quadratic q;
  };
  std::vector<Element> elements;
  elements.reserve(2 * ps.size() + 2);
  if (lo > -kInf) {
    elements.push_back({-kInf, ps.front().q.slope(lo), {0.0, lo, -ps.front().q(lo)}});
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Quadratic& q = ps[i].q;
    const double l = ps[i].left;
    const double r = f.piece_right(i);
    if (q.a > 0.0) {
      const double inv = 1.0 / (4.0 * q.a);
      elements.push_back({l == -kInf ? -kInf : q.slope(l), r == kInf ? kInf : q.slope(r),
                          {inv, -q.b / (2.0 * q.a), q.b * q.b * inv - q.c}});
    }
    if (i + 1 < ps.size()) {
      elements.push_back({q.slope(r), ps[i + 1].q.slope(r), {0.0, r, -q(r)}});
    }
  }
  if (hi < kInf) {
    elements.push_back({ps.back().q.slope(hi), kInf, {0.0, hi, -ps.back().q(hi)}});
  }

  const double dual_lo = lo > -kInf ? -kInf : (ps.front().q.a > 0.0 ? -kInf : ps.front().q.b);
  const double dual_hi = hi < kInf ? kInf : (ps.back().q.a > 0.0 ? kInf : ps.back().q.b);

  std::vector<Piece> out;
  double cursor = dual_lo;
  for (const auto& e : elements) {
    const double start = out.empty() ? dual_lo : std::max(e.ylo, cursor);
    const double stop = std::min(e.yhi, dual_hi);
    if (!(stop > start)) continue;
    out.push_back({start, e.q});
    cursor = stop;
  }
  if (out.empty()) {
    // Affine f: the conjugate lives on the single slope.
    const Quadratic& q = ps.front().q;
    return PLQFunction::from_pieces(q.b, q.b, {Piece{q.b, {0.0, 0.0, -q.c}}});
  }
  return normalize(PLQFunction::from_pieces(dual_lo, dual_hi, std::move(out)));
}

PLQFunction recession(const PLQFunction& f) {
  require_proper(f, "recession");
  const auto ps = f.pieces();
  const bool open_left = f.lo() == -kInf && ps.front().q.a == 0.0;
  const bool open_right = f.hi() == kInf && ps.back().q.a == 0.0;
  std::vector<Piece> out;
  if (open_left) out.push_back({-kInf, {0.0, ps.front().q.b, 0.0}});
  if (open_right) out.push_back({0.0, {0.0, ps.back().q.b, 0.0}});
  if (out.empty()) out.push_back({0.0, {}});
  return normalize(PLQFunction::from_pieces(open_left ? -kInf : 0.0, open_right ? kInf : 0.0, std::move(out)));
}

SubdiffInterval subdifferential(const PLQFunction& f, double x) {
  if (!f.proper() || !(x >= f.lo() && x <= f.hi())) return SubdiffInterval::none();
  if (f.lo() == f.hi()) return {-kInf, kInf, false};
  return {f.left_derivative(x), f.right_derivative(x), false};
}

SubdiffInterval normal_cone(Interval set, double x) {
  if (set.empty() || !set.contains(x)) return SubdiffInterval::none();
  const double lo = x == set.lo ? -kInf : 0.0;
  const double hi = x == set.hi ? kInf : 0.0;
  return {lo, hi, false};
}

PLQFunction support_function(Interval set) {
  if (set.empty()) throw std::invalid_argument("support_function: empty set");
  const bool open_left = set.lo > -kInf;   // sigma finite for y < 0
  const bool open_right = set.hi < kInf;   // sigma finite for y > 0
  std::vector<Piece> out;
  if (open_left) out.push_back({-kInf, {0.0, set.lo, 0.0}});
  if (open_right) out.push_back({0.0, {0.0, set.hi, 0.0}});
  if (out.empty()) out.push_back({0.0, {}});
  return normalize(PLQFunction::from_pieces(open_left ? -kInf : 0.0, open_right ? kInf : 0.0, std::move(out)));
}

PLQFunction scale(double alpha, const PLQFunction& f) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("scale: negative factor");
  if (!f.proper()) return f;
  if (alpha == 0.0) return PLQFunction::indicator(f.domain());
  std::vector<Piece> out(f.pieces().begin(), f.pieces().end());
  for (auto& p : out) p.q = {alpha * p.q.a, alpha * p.q.b, alpha * p.q.c};
  return PLQFunction::from_pieces(f.lo(), f.hi(), std::move(out));
}

PLQFunction add(const PLQFunction& f, const PLQFunction& g) {
  if (!f.proper() || !g.proper()) return PLQFunction::improper();
  const double lo = std::max(f.lo(), g.lo());
  const double hi = std::min(f.hi(), g.hi());
  if (lo > hi) return PLQFunction::improper();
  if (lo == hi) {
    const Quadratic q = sum(f.pieces()[f.piece_index(lo)].q, g.pieces()[g.piece_index(lo)].q);
    return PLQFunction::from_pieces(lo, hi, {Piece{lo, q}});
  }
  std::vector<double> cuts;
  for (double x : f.breakpoints()) if (x > lo && x < hi) cuts.push_back(x);
  for (double x : g.breakpoints()) if (x > lo && x < hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Piece> out;
  out.reserve(cuts.size() + 1);
  double left = lo;
  for (std::size_t k = 0; k <= cuts.size(); ++k) {
    const double right = k < cuts.size() ? cuts[k] : hi;
    const double mid = midpoint(left, right);
    out.push_back({left, sum(f.pieces()[f.piece_index(mid)].q, g.pieces()[g.piece_index(mid)].q)});
    left = right;
  }
  return normalize(PLQFunction::from_pieces(lo, hi, std::move(out)));
}

PLQFunction shift(const PLQFunction& f, double b) {
  if (!f.proper()) return f;
  std::vector<Piece> out;
  out.reserve(f.size());
  for (const auto& p : f.pieces()) {
    const Quadratic& q = p.q;
    out.push_back({p.left - b, {q.a, 2.0 * q.a * b + q.b, (q.a * b + q.b) * b + q.c}});
  }
  return PLQFunction::from_pieces(f.lo() - b, f.hi() - b, std::move(out));
}

PLQFunction tilt(const PLQFunction& f, double slope) {
  if (!f.proper()) return f;
  std::vector<Piece> out(f.pieces().begin(), f.pieces().end());
  for (auto& p : out) p.q.b += slope;
  return normalize(PLQFunction::from_pieces(f.lo(), f.hi(), std::move(out)));
}

double prox(const PLQFunction& f, double gamma, double x) {
  require_proper(f, "prox");
  if (!(gamma > 0.0)) throw std::invalid_argument("prox: step must be positive");
  double best_u = f.lo() > -kInf ? f.lo() : x;
  double best = kInf;
  const auto ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Quadratic& q = ps[i].q;
    double u = (x - gamma * q.b) / (1.0 + 2.0 * gamma * q.a);
    u = std::clamp(u, ps[i].left, f.piece_right(i));
    const double d = u - x;
    const double val = q(u) + d * d / (2.0 * gamma);
    if (val < best) {
      best = val;
      best_u = u;
    }
  }
  return best_u;
}

PLQFunction lipschitz_envelope(const PLQFunction& f, double lambda) {
  require_proper(f, "lipschitz_envelope");
  if (!(lambda > 0.0)) throw std::invalid_argument("lipschitz_envelope: lambda must be positive");
  const PLQFunction fs = conjugate(f);
  if (!fs.domain().contains(0.0)) {
    throw std::invalid_argument("lipschitz_envelope: function is unbounded below");
  }
  const double bound = 1.0 / lambda;
  return conjugate(add(fs, PLQFunction::indicator({-bound, bound})));
}

PLQFunction expectation(std::span<const double> weights, std::span<const PLQFunction> fs) {
  if (weights.size() != fs.size() || fs.empty()) {
    throw std::invalid_argument("expectation: weights and functions must be nonempty and of equal length");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("expectation: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("expectation: weights must sum to one");
  PLQFunction acc = scale(weights[0], fs[0]);
  for (std::size_t i = 1; i < fs.size(); ++i) acc = add(acc, scale(weights[i], fs[i]));
  return acc;
}

SubdiffInterval inverse_subdifferential(const PLQFunction& f, double y) {
  if (!f.proper()) return SubdiffInterval::none();
  if (f.lo() == f.hi()) return SubdiffInterval::point(f.lo());
  const auto ps = f.pieces();
  double xmin = kInf;
  double xmax = -kInf;
  auto hit = [&](double a, double b) {
    xmin = std::min(xmin, a);
    xmax = std::max(xmax, b);
  };
  if (f.lo() > -kInf && y <= ps.front().q.slope(f.lo())) hit(f.lo(), f.lo());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Quadratic& q = ps[i].q;
    const double l = ps[i].left;
    const double r = f.piece_right(i);
    if (q.a > 0.0) {
      const double x = (y - q.b) / (2.0 * q.a);
      if (x >= l && x <= r) hit(x, x);
    } else if (q.b == y) {
      hit(l, r);
    }
    if (i + 1 < ps.size() && q.slope(r) <= y && y <= ps[i + 1].q.slope(r)) hit(r, r);
  }
  if (f.hi() < kInf && y >= ps.back().q.slope(f.hi())) hit(f.hi(), f.hi());
  if (xmin > xmax) return SubdiffInterval::none();
  return {xmin, xmax, false};
}

Minimum minimize(const PLQFunction& f) {
  require_proper(f, "minimize");
  const SubdiffInterval argmin = inverse_subdifferential(f, 0.0);
  if (argmin.empty) throw std::domain_error("minimize: function is unbounded below");
  return {f(argmin.min_norm()), argmin};
}

std::vector<double> probe_points(const PLQFunction& f, const PLQFunction& g) {
  std::vector<double> knots;
  for (const PLQFunction* h : {&f, &g}) {
    if (!h->proper()) continue;
    for (double x : h->breakpoints()) knots.push_back(x);
    if (h->lo() > -kInf) knots.push_back(h->lo());
    if (h->hi() < kInf) knots.push_back(h->hi());
  }
  if (knots.empty()) knots.push_back(0.0);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<double> probes;
  probes.reserve(2 * knots.size() + 1);
  for (std::size_t i = 0; i < knots.size(); ++i) {
    probes.push_back(knots[i]);
    if (i + 1 < knots.size()) probes.push_back(0.5 * (knots[i] + knots[i + 1]));
  }
  const double span = knots.back() - knots.front();
  probes.push_back(knots.front() - 10.0 * (1.0 + span));
  probes.push_back(knots.back() + 10.0 * (1.0 + span));
  std::sort(probes.begin(), probes.end());
  return probes;
}

double max_discrepancy(const PLQFunction& f, const PLQFunction& g, std::span<const double> probes) {
  double worst = 0.0;
  for (double x : probes) {
    const double fx = f(x);
    const double gx = g(x);
    const bool fi = std::isinf(fx);
    const bool gi = std::isinf(gx);
    if (fi && gi) continue;
    if (fi != gi) return kInf;
    worst = std::max(worst, std::abs(fx - gx));
  }
  return worst;
}

double max_discrepancy(const PLQFunction& f, const PLQFunction& g) {
  const auto probes = probe_points(f, g);
  return max_discrepancy(f, g, probes);
}

bool equal_on_probes(const PLQFunction& f, const PLQFunction& g, double tol) {
  if (f.proper() != g.proper()) return false;
  for (double x : probe_points(f, g)) {
    const double fx = f(x);
    const double gx = g(x);
    if (std::isinf(fx) || std::isinf(gx)) {
      if (fx != gx) return false;
      continue;
    }
    if (std::abs(fx - gx) > tol * (1.0 + std::max(std::abs(fx), std::abs(gx)))) return false;
  }
  return true;
}

}  // namespace scdual
