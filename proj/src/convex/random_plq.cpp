#include "scdual/convex/random_plq.hpp"

#include <algorithm>
#include <vector>

#include "scdual/convex/calculus.hpp"

namespace scdual {

namespace {

Quadratic anchored(double a, double slope, double value, double t) {
  // a(x - t)² + slope(x - t) + value
  return {a, slope - 2.0 * a * t, (a * t - slope) * t + value};
}

}  // namespace

PLQFunction random_plq(std::mt19937_64& rng, const RandomPLQOptions& opt) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto curvature = [&]() {
    if (!opt.strongly_convex && unit(rng) < opt.linear_piece_prob) return 0.0;
    return uniform(opt.strongly_convex ? 0.1 : 0.05, opt.max_curvature);
  };

  if (!opt.full_domain && unit(rng) < opt.point_domain_prob) {
    const double x0 = uniform(-opt.span, opt.span);
    const Quadratic q = anchored(curvature(), uniform(-3.0, 3.0), uniform(-2.0, 2.0), x0);
    return PLQFunction::from_pieces(x0, x0, {{x0, q}});
  }

  double lo = -kInf;
  double hi = kInf;
  if (!opt.full_domain) {
    const bool finite_lo = opt.bounded_domain || unit(rng) < opt.finite_end_prob;
    const bool finite_hi = opt.bounded_domain || unit(rng) < opt.finite_end_prob;
    double u = uniform(-opt.span, opt.span);
    double v = uniform(-opt.span, opt.span);
    if (u > v) std::swap(u, v);
    if (v - u < 0.5) v = u + 0.5;
    if (finite_lo) lo = u;
    if (finite_hi) hi = v;
  }

  const double window_lo = lo > -kInf ? lo : -opt.span;
  const double window_hi = hi < kInf ? hi : opt.span;
  std::uniform_int_distribution<int> count(0, std::max(0, opt.max_breakpoints));
  std::vector<double> cuts;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) cuts.push_back(uniform(window_lo, window_hi));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> kept;
  for (double x : cuts) {
    if (x - window_lo < 0.05 || window_hi - x < 0.05) continue;
    if (!kept.empty() && x - kept.back() < 0.05) continue;
    if (x <= lo || x >= hi) continue;
    kept.push_back(x);
  }

  std::vector<PLQFunction::Piece> pieces;
  const double anchor = !kept.empty() ? kept.front()
                        : lo > -kInf  ? lo
                        : hi < kInf   ? hi
                                      : uniform(-1.0, 1.0);
  Quadratic q = anchored(curvature(), uniform(-3.0, 3.0), uniform(-2.0, 2.0), anchor);
  pieces.push_back({lo, q});
  for (double t : kept) {
    const double jump = unit(rng) < 0.3 ? 0.0 : uniform(0.0, 2.0);
    const Quadratic next = anchored(curvature(), q.slope(t) + jump, q(t), t);
    pieces.push_back({t, next});
    q = next;
  }
  return normalize(PLQFunction::from_pieces(lo, hi, std::move(pieces)));
}

}  // namespace scdual
