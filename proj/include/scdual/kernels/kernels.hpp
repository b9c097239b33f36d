#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace scdual::kernels {

enum class Isa { Scalar, Avx2 };

/// Whether the running CPU and this build support the instruction set.
bool isa_available(Isa isa);
/// The instruction set used by the dispatched entry points.
Isa active_isa();
/// Pins dispatch to `isa` (must be available); std::nullopt restores auto
/// detection. Intended for tests and benchmarks.
void force_isa(std::optional<Isa> isa);
const char* isa_name(Isa isa);

struct GridMax {
  double value;
  std::size_t index;
};

/// y = M x for a row-major rows×cols matrix.
void gemv(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x, std::span<double> y);
/// y = Mᵀ x for a row-major rows×cols matrix.
void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x,
            std::span<double> y);
/// max over j in [j0, j1] of (a·x + b)·x + c at x = x0 + j·dx; the first
/// index attaining the maximum is reported. Requires j0 <= j1.
GridMax quadratic_grid_max(double a, double b, double c, double x0, double dx, std::size_t j0, std::size_t j1);

namespace scalar {
void gemv(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x, std::span<double> y);
void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x,
            std::span<double> y);
GridMax quadratic_grid_max(double a, double b, double c, double x0, double dx, std::size_t j0, std::size_t j1);
}  // namespace scalar

namespace avx2 {
void gemv(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x, std::span<double> y);
void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols, std::span<const double> x,
            std::span<double> y);
GridMax quadratic_grid_max(double a, double b, double c, double x0, double dx, std::size_t j0, std::size_t j1);
}  // namespace avx2

}  // namespace scdual::kernels
