#include "scdual/kernels/kernels.hpp"

#include <limits>

namespace scdual::kernels::scalar {

void gemv(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = m.data() + i * cols;
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += r[j] * x[j];
    y[i] = s;
  }
}

void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x,
            std::span<double> y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = m.data() + i * cols;
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < cols; ++j) y[j] += r[j] * xi;
  }
}

GridMax quadratic_grid_max(double a, double b, double c, double x0, double dx, std::size_t j0, std::size_t j1) {
  GridMax best{-std::numeric_limits<double>::infinity(), j0};
  for (std::size_t j = j0; j <= j1; ++j) {
    const double x = x0 + static_cast<double>(j) * dx;
    const double v = (a * x + b) * x + c;
    if (v > best.value) best = {v, j};
  }
  return best;
}

}  // namespace scdual::kernels::scalar
