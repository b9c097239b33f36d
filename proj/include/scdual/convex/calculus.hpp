#pragma once

#include <span>
#include <vector>

#include "scdual/convex/plq.hpp"

namespace scdual {

/// f(x), +inf outside the domain.
inline double evaluate(const PLQFunction& f, double x) { return f(x); }

/// Evaluates f at x, or at the nearest domain end when x lies outside the
/// domain by at most tol·(1 + |x|). Used when x carries round-off from a
/// linear solve but is meant to sit on the domain boundary.
double evaluate_near(const PLQFunction& f, double x, double tol);

/// Merges adjacent pieces whose coefficients agree to a relative 1e-12.
PLQFunction normalize(const PLQFunction& f);

/// Fenchel conjugate f*(y) = sup_x { xy - f(x) }, computed by a slope-range
/// sweep: every quadratic piece maps to a quadratic dual piece over its slope
/// range and every breakpoint or finite domain end maps to a linear dual
/// piece over its subdifferential.
PLQFunction conjugate(const PLQFunction& f);

/// Recession function: the asymptotic slope of f in each direction.
/// Computed from the end pieces, independently of the conjugate.
PLQFunction recession(const PLQFunction& f);

/// [f'_-(x), f'_+(x)]; unbounded on the outer side at a finite domain end;
/// empty outside the domain.
SubdiffInterval subdifferential(const PLQFunction& f, double x);

/// Normal cone to the closed interval `set` at x.
SubdiffInterval normal_cone(Interval set, double x);

/// sigma_D(y) = sup_{x in D} xy.
PLQFunction support_function(Interval set);

/// alpha·f for alpha > 0 and the indicator of cl dom f for alpha = 0.
PLQFunction scale(double alpha, const PLQFunction& f);

/// Pointwise sum. Disjoint domains give PLQFunction::improper().
PLQFunction add(const PLQFunction& f, const PLQFunction& g);

/// x -> f(x + b).
PLQFunction shift(const PLQFunction& f, double b);

/// x -> f(x) + slope·x.
PLQFunction tilt(const PLQFunction& f, double slope);

/// argmin_u f(u) + (u - x)² / (2γ).
double prox(const PLQFunction& f, double gamma, double x);

/// inf_u { f(u) + |x - u| / λ }, the largest (1/λ)-Lipschitz minorant.
PLQFunction lipschitz_envelope(const PLQFunction& f, double lambda);

/// Σ w_i f_i with w a probability vector; 0·f is read as the indicator of
/// cl dom f. Empty common domain gives PLQFunction::improper().
PLQFunction expectation(std::span<const double> weights, std::span<const PLQFunction> fs);

/// {x : y ∈ ∂f(x)}, i.e. the argmin set of f - y·x. Empty when the infimum
/// is not attained.
SubdiffInterval inverse_subdifferential(const PLQFunction& f, double y);

struct Minimum {
  double value;
  SubdiffInterval argmin;
};

/// Exact minimum of f; throws std::domain_error if f is unbounded below.
Minimum minimize(const PLQFunction& f);

/// Probe set for evaluation-based equality: all breakpoints and finite
/// domain ends of both functions, the midpoints between consecutive ones,
/// and two far points on either side.
std::vector<double> probe_points(const PLQFunction& f, const PLQFunction& g);

/// Largest |f(x) - g(x)| over the probes. Two infinite values agree; a
/// finite/infinite mismatch counts as +inf.
double max_discrepancy(const PLQFunction& f, const PLQFunction& g, std::span<const double> probes);
double max_discrepancy(const PLQFunction& f, const PLQFunction& g);

/// Equality up to tol·(1 + |value|) on the standard probe set.
bool equal_on_probes(const PLQFunction& f, const PLQFunction& g, double tol = 1e-9);

}  // namespace scdual
