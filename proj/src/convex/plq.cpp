#include "scdual/convex/plq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scdual {

double Interval::distance(double x) const {
  if (empty()) return kInf;
  if (x < lo) return lo - x;
  if (x > hi) return x - hi;
  return 0.0;
}

bool SubdiffInterval::contains(double y, double tol) const {
  if (empty) return false;
  return y >= lo - tol && y <= hi + tol;
}

double SubdiffInterval::distance(double y) const {
  if (empty) return kInf;
  if (y < lo) return lo - y;
  if (y > hi) return y - hi;
  return 0.0;
}

double SubdiffInterval::min_norm() const {
  if (empty) throw std::logic_error("min_norm of an empty subdifferential");
  if (lo > 0.0) return lo;
  if (hi < 0.0) return hi;
  return 0.0;
}

PLQFunction::PLQFunction() : PLQFunction(-kInf, kInf, {Piece{-kInf, {}}}, true) {}

PLQFunction::PLQFunction(double lo, double hi, std::vector<Piece> pieces, bool proper)
    : lo_(lo), hi_(hi), pieces_(std::move(pieces)), proper_(proper) {}

PLQFunction PLQFunction::improper() { return PLQFunction(kInf, -kInf, {}, false); }

namespace {

[[noreturn]] void reject(const std::string& what) {
  throw std::invalid_argument("invalid PLQ function: " + what);
}

}  // namespace

PLQFunction PLQFunction::from_pieces(double lo, double hi, std::vector<Piece> pieces) {
  if (std::isnan(lo) || std::isnan(hi)) reject("NaN domain end");
  if (lo > hi) reject("empty domain");
  if (lo == kInf || hi == -kInf) reject("domain at infinity");
  if (pieces.empty()) reject("no pieces");
  if (pieces.front().left != lo) reject("first piece must start at the domain's left end");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (!std::isfinite(p.q.a) || !std::isfinite(p.q.b) || !std::isfinite(p.q.c)) {
      reject("non-finite coefficient in piece " + std::to_string(i));
    }
    if (p.q.a < 0.0) reject("negative quadratic coefficient in piece " + std::to_string(i));
    if (i > 0) {
      if (!std::isfinite(p.left)) reject("interior breakpoint must be finite");
      if (!(p.left > pieces[i - 1].left)) reject("breakpoints must be strictly increasing");
    }
  }
  if (lo == hi) {
    if (pieces.size() != 1) reject("a one-point domain has exactly one piece");
  } else if (!(pieces.back().left < hi)) {
    reject("last breakpoint must lie inside the domain");
  }
  // Unbounded end pieces need a finite anchor only through their quadratic.
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    const double x = pieces[i].left;
    const Quadratic& l = pieces[i - 1].q;
    const Quadratic& r = pieces[i].q;
    const double vl = l(x);
    const double vr = r(x);
    if (std::abs(vl - vr) > kStructuralTol * (1.0 + std::max(std::abs(vl), std::abs(vr)))) {
      reject("discontinuity at breakpoint " + std::to_string(x));
    }
    const double sl = l.slope(x);
    const double sr = r.slope(x);
    if (sl > sr + kStructuralTol * (1.0 + std::max(std::abs(sl), std::abs(sr)))) {
      reject("slopes decrease at breakpoint " + std::to_string(x));
    }
  }
  return PLQFunction(lo, hi, std::move(pieces), true);
}

PLQFunction PLQFunction::quadratic(double a, double b, double c) {
  return from_pieces(-kInf, kInf, {Piece{-kInf, {a, b, c}}});
}

PLQFunction PLQFunction::affine(double slope, double intercept) {
  return from_pieces(-kInf, kInf, {Piece{-kInf, {0.0, slope, intercept}}});
}

PLQFunction PLQFunction::indicator(Interval set) {
  if (set.empty()) return improper();
  return from_pieces(set.lo, set.hi, {Piece{set.lo, {}}});
}

PLQFunction PLQFunction::abs(double scale) {
  if (scale < 0.0) throw std::invalid_argument("abs: negative scale");
  if (scale == 0.0) return PLQFunction();
  return from_pieces(-kInf, kInf, {Piece{-kInf, {0.0, -scale, 0.0}}, Piece{0.0, {0.0, scale, 0.0}}});
}

std::vector<double> PLQFunction::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].left);
  return out;
}

std::size_t PLQFunction::piece_index(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Piece& p) { return v < p.left; });
  if (it == pieces_.begin()) return 0;
  return static_cast<std::size_t>(it - pieces_.begin()) - 1;
}

double PLQFunction::operator()(double x) const {
  if (!proper_ || std::isnan(x) || x < lo_ || x > hi_) return kInf;
  return pieces_[piece_index(x)].q(x);
}

double PLQFunction::right_derivative(double x) const {
  if (!proper_ || x < lo_ || x > hi_) return kInf;
  if (x == hi_) return kInf;
  return pieces_[piece_index(x)].q.slope(x);
}

double PLQFunction::left_derivative(double x) const {
  if (!proper_ || x < lo_ || x > hi_) return -kInf;
  if (x == lo_) return -kInf;
  std::size_t i = piece_index(x);
  if (i > 0 && pieces_[i].left == x) --i;
  return pieces_[i].q.slope(x);
}

}  // namespace scdual
