#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scdual {

/// One d-vector per row. Rows are tree nodes for adapted processes (and
/// leaf-paths when the same shape holds per-path data such as terminal
/// values).
class AdaptedProcess {
 public:
  AdaptedProcess() = default;
  AdaptedProcess(std::size_t rows, std::size_t dim, double fill = 0.0)
      : rows_(rows), dim_(dim), v_(rows * dim, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  double& operator()(std::size_t row, std::size_t k) { return v_[row * dim_ + k]; }
  double operator()(std::size_t row, std::size_t k) const { return v_[row * dim_ + k]; }
  std::span<double> at(std::size_t row) { return std::span<double>(v_).subspan(row * dim_, dim_); }
  std::span<const double> at(std::size_t row) const { return std::span<const double>(v_).subspan(row * dim_, dim_); }
  std::span<double> data() { return v_; }
  std::span<const double> data() const { return v_; }

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> v_;
};

/// Per-path values at leaves (terminal multipliers, terminal utilities).
using LeafValues = AdaptedProcess;

/// One d-vector per (leaf-path, time index).
class RawProcess {
 public:
  RawProcess() = default;
  RawProcess(std::size_t paths, std::size_t times, std::size_t dim, double fill = 0.0)
      : paths_(paths), times_(times), dim_(dim), v_(paths * times * dim, fill) {}

  std::size_t paths() const { return paths_; }
  std::size_t times() const { return times_; }
  std::size_t dim() const { return dim_; }
  double& operator()(std::size_t path, std::size_t time, std::size_t k) { return v_[(path * times_ + time) * dim_ + k]; }
  double operator()(std::size_t path, std::size_t time, std::size_t k) const {
    return v_[(path * times_ + time) * dim_ + k];
  }
  std::span<double> at(std::size_t path, std::size_t time) {
    return std::span<double>(v_).subspan((path * times_ + time) * dim_, dim_);
  }
  std::span<const double> at(std::size_t path, std::size_t time) const {
    return std::span<const double>(v_).subspan((path * times_ + time) * dim_, dim_);
  }

 private:
  std::size_t paths_ = 0;
  std::size_t times_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> v_;
};

class ScenarioTree;

/// The raw view of an adapted process: every path reads its node's value.
RawProcess lift(const ScenarioTree& tree, const AdaptedProcess& v);

/// Largest absolute entry.
double max_abs(const AdaptedProcess& v);

}  // namespace scdual
