#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace scdual {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval of the extended real line. `lo > hi` encodes the empty set.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool empty() const { return lo > hi; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool bounded() const { return lo > -kInf && hi < kInf; }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  /// Distance from x to the interval; +inf when empty.
  double distance(double x) const;
};

/// a·x² + b·x + c.
struct Quadratic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double operator()(double x) const { return (a * x + b) * x + c; }
  double slope(double x) const { return 2.0 * a * x + b; }
};

/// The subdifferential of a univariate convex function at a point: the set
/// [lo, hi] (possibly unbounded), or the empty set.
struct SubdiffInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = false;

  static SubdiffInterval none() { return {0.0, 0.0, true}; }
  static SubdiffInterval point(double y) { return {y, y, false}; }

  bool contains(double y, double tol = 0.0) const;
  /// Euclidean distance from y to the set; +inf when empty.
  double distance(double y) const;
  /// Element of least magnitude. Requires a nonempty set.
  double min_norm() const;
};

/// Univariate closed proper convex piecewise linear-quadratic function.
///
/// The domain is the closed interval [lo, hi] of the extended reals. Piece i
/// covers [left_i, left_{i+1}] (the last piece ends at hi) and holds a
/// quadratic with nonnegative leading coefficient. Values agree at interior
/// breakpoints and one-sided slopes are nondecreasing. Outside the domain the
/// function is +inf.
///
/// An explicitly improper value (empty domain, +inf everywhere) exists so
/// that sums and mixtures with disjoint domains have a representation; the
/// calculus entry points reject it.
class PLQFunction {
 public:
  struct Piece {
    double left;
    Quadratic q;
  };

  /// The zero function on the real line.
  PLQFunction();

  /// Validates the invariants and throws std::invalid_argument on failure.
  static PLQFunction from_pieces(double lo, double hi, std::vector<Piece> pieces);
  static PLQFunction improper();

  static PLQFunction quadratic(double a, double b = 0.0, double c = 0.0);
  static PLQFunction affine(double slope, double intercept = 0.0);
  static PLQFunction indicator(Interval set);
  static PLQFunction abs(double scale = 1.0);

  bool proper() const { return proper_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Interval domain() const { return proper_ ? Interval{lo_, hi_} : Interval{kInf, -kInf}; }
  std::span<const Piece> pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  /// Right end of piece i.
  double piece_right(std::size_t i) const { return i + 1 < pieces_.size() ? pieces_[i + 1].left : hi_; }
  /// Interior breakpoints in increasing order.
  std::vector<double> breakpoints() const;

  /// Index of the piece whose closed interval contains x, preferring the
  /// right-hand piece at a breakpoint. Requires x in the domain.
  std::size_t piece_index(double x) const;

  double operator()(double x) const;
  /// +inf at (and beyond) a finite right domain end.
  double right_derivative(double x) const;
  /// -inf at (and before) a finite left domain end.
  double left_derivative(double x) const;

 private:
  PLQFunction(double lo, double hi, std::vector<Piece> pieces, bool proper);

  double lo_;
  double hi_;
  std::vector<Piece> pieces_;
  bool proper_;
};

/// Tolerance for structural checks (continuity and slope monotonicity) on
/// floating-point representations produced by the calculus.
inline constexpr double kStructuralTol = 1e-8;

}  // namespace scdual
