#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "scdual/kernels/kernels.hpp"

using namespace scdual::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / (1.0 + std::abs(a[i])));
  return worst;
}

}  // namespace

TEST_CASE("scalar gemv against a direct loop") {
  std::mt19937_64 rng(51);
  const std::size_t rows = 7, cols = 5;
  const auto m = random_vector(rng, rows * cols);
  const auto x = random_vector(rng, cols);
  const auto xt = random_vector(rng, rows);
  std::vector<double> y(rows), yt(cols);
  scalar::gemv(m, rows, cols, x, y);
  scalar::gemv_t(m, rows, cols, xt, yt);
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += m[r * cols + c] * x[c];
    CHECK(y[r] == doctest::Approx(acc));
  }
  for (std::size_t c = 0; c < cols; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < rows; ++r) acc += m[r * cols + c] * xt[r];
    CHECK(yt[c] == doctest::Approx(acc));
  }
}

TEST_CASE("scalar grid maximum") {
  // -(x - 1)² on x = -2, -1.5, ..., 3 peaks at x = 1, index 6.
  const auto g = scalar::quadratic_grid_max(-1.0, 2.0, -1.0, -2.0, 0.5, 0, 10);
  CHECK(g.index == 6);
  CHECK(g.value == doctest::Approx(0.0));
  // Ties report the first index.
  const auto flat = scalar::quadratic_grid_max(0.0, 0.0, 1.0, 0.0, 1.0, 3, 9);
  CHECK(flat.index == 3);
  const auto one = scalar::quadratic_grid_max(1.0, 0.0, 0.0, 0.0, 1.0, 4, 4);
  CHECK(one.index == 4);
}

TEST_CASE("AVX2 kernels agree with the scalar kernels") {
  if (!isa_available(Isa::Avx2)) {
    MESSAGE("AVX2 is not available; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(52);
  for (std::size_t rows : {1u, 3u, 4u, 5u, 8u, 13u, 40u}) {
    for (std::size_t cols : {1u, 2u, 4u, 7u, 16u, 33u}) {
      const auto m = random_vector(rng, rows * cols);
      const auto x = random_vector(rng, cols);
      const auto xt = random_vector(rng, rows);
      std::vector<double> ys(rows), yv(rows), ts(cols), tv(cols);
      scalar::gemv(m, rows, cols, x, ys);
      avx2::gemv(m, rows, cols, x, yv);
      scalar::gemv_t(m, rows, cols, xt, ts);
      avx2::gemv_t(m, rows, cols, xt, tv);
      CHECK(max_rel_diff(ys, yv) <= 1e-13);
      CHECK(max_rel_diff(ts, tv) <= 1e-13);
    }
  }
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<std::size_t> len(0, 300);
  for (int i = 0; i < 2000; ++i) {
    const double a = i % 3 == 0 ? 0.0 : -std::abs(u(rng)), b = u(rng), c = u(rng), x0 = u(rng), dx = 0.01 + std::abs(u(rng)) / 50;
    const std::size_t j0 = len(rng), j1 = j0 + len(rng);
    const auto s = scalar::quadratic_grid_max(a, b, c, x0, dx, j0, j1);
    const auto v = avx2::quadratic_grid_max(a, b, c, x0, dx, j0, j1);
    CHECK(v.value == doctest::Approx(s.value).epsilon(1e-13));
    if (v.index != s.index) {
      // Only a rounding-level tie may pick a different index.
      const auto at = [&](std::size_t j) {
        const double x = x0 + static_cast<double>(j) * dx;
        return (a * x + b) * x + c;
      };
      CHECK(std::abs(at(v.index) - at(s.index)) <= 1e-13 * (1.0 + std::abs(s.value)));
    }
  }
}

TEST_CASE("dispatch can be pinned") {
  force_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  const std::vector<double> m{1, 2, 3, 4}, x{1, 1};
  std::vector<double> y(2);
  gemv(m, 2, 2, x, y);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 7.0);
  force_isa(std::nullopt);
  CHECK(isa_name(active_isa()) != nullptr);
}
