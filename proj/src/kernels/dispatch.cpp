#include "scdual/kernels/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace scdual::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SCDUAL_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

// 0 = auto, 1 = scalar, 2 = avx2.
std::atomic<int> g_forced{0};

}  // namespace

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

Isa active_isa() {
  switch (g_forced.load(std::memory_order_relaxed)) {
    case 1:
      return Isa::Scalar;
    case 2:
      return Isa::Avx2;
    default:
      return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  }
}

void force_isa(std::optional<Isa> isa) {
  if (!isa) {
    g_forced.store(0);
    return;
  }
  if (!isa_available(*isa)) throw std::invalid_argument("instruction set not available on this machine");
  g_forced.store(*isa == Isa::Scalar ? 1 : 2);
}

const char* isa_name(Isa isa) { return isa == Isa::Scalar ? "scalar" : "avx2"; }

void gemv(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x, std::span<double> y) {
  if (active_isa() == Isa::Avx2) return avx2::gemv(m, rows, cols, x, y);
  scalar::gemv(m, rows, cols, x, y);
}

void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x,
            std::span<double> y) {
  if (active_isa() == Isa::Avx2) return avx2::gemv_t(m, rows, cols, x, y);
  scalar::gemv_t(m, rows, cols, x, y);
}

GridMax quadratic_grid_max(double a, double b, double c, double x0, double dx, std::size_t j0, std::size_t j1) {
  if (active_isa() == Isa::Avx2) return avx2::quadratic_grid_max(a, b, c, x0, dx, j0, j1);
  return scalar::quadratic_grid_max(a, b, c, x0, dx, j0, j1);
}

}  // namespace scdual::kernels
