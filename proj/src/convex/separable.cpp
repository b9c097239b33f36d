#include "scdual/convex/separable.hpp"

#include <stdexcept>

#include "scdual/convex/calculus.hpp"

namespace scdual {

SeparableIntegrand::SeparableIntegrand(std::vector<PLQFunction> coords) : coords_(std::move(coords)) {}

SeparableIntegrand SeparableIntegrand::uniform(std::size_t dim, const PLQFunction& f) {
  return SeparableIntegrand(std::vector<PLQFunction>(dim, f));
}

double SeparableIntegrand::operator()(std::span<const double> x) const {
  if (x.size() != coords_.size()) throw std::invalid_argument("SeparableIntegrand: dimension mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    const double v = coords_[k](x[k]);
    if (v == kInf) return kInf;
    total += v;
  }
  return total;
}

std::vector<Interval> SeparableIntegrand::box() const {
  std::vector<Interval> out;
  out.reserve(coords_.size());
  for (const auto& f : coords_) out.push_back(f.domain());
  return out;
}

bool SeparableIntegrand::proper() const {
  if (coords_.empty()) return false;
  for (const auto& f : coords_) if (!f.proper()) return false;
  return true;
}

SeparableIntegrand SeparableIntegrand::conjugate() const {
  std::vector<PLQFunction> out;
  out.reserve(coords_.size());
  for (const auto& f : coords_) out.push_back(scdual::conjugate(f));
  return SeparableIntegrand(std::move(out));
}

SeparableIntegrand SeparableIntegrand::recession() const {
  std::vector<PLQFunction> out;
  out.reserve(coords_.size());
  for (const auto& f : coords_) out.push_back(scdual::recession(f));
  return SeparableIntegrand(std::move(out));
}

}  // namespace scdual
