#pragma once

#include <span>
#include <vector>

#include "scdual/convex/plq.hpp"

namespace scdual {

/// Sum of univariate PLQ functions, one per coordinate. The domain is the
/// product box of the coordinate domains.
class SeparableIntegrand {
 public:
  SeparableIntegrand() = default;
  explicit SeparableIntegrand(std::vector<PLQFunction> coords);
  /// The same function in every one of `dim` coordinates.
  static SeparableIntegrand uniform(std::size_t dim, const PLQFunction& f);

  std::size_t dim() const { return coords_.size(); }
  const PLQFunction& operator[](std::size_t k) const { return coords_[k]; }
  std::span<const PLQFunction> coords() const { return coords_; }

  double operator()(std::span<const double> x) const;
  std::vector<Interval> box() const;
  bool proper() const;

  SeparableIntegrand conjugate() const;
  SeparableIntegrand recession() const;

 private:
  std::vector<PLQFunction> coords_;
};

}  // namespace scdual
