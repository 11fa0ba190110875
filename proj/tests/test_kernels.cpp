#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "doctest.h"
#include "scrid/error.hpp"
#include "scrid/kernels.hpp"

using namespace scrid;
using namespace scrid::kernels;

namespace {

double ulp_distance(double a, double b) {
  if (a == b) return 0.0;
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) / (scale * std::numeric_limits<double>::epsilon());
}

}  // namespace

TEST_CASE("scalar kernel matches the closed form") {
  const double xs[] = {0.0, 1.0, 2.0};
  const double ys[] = {0.0, 0.0, 1.0};
  double h[3];
  const double sum = hazard_row_scalar(xs, ys, 3, 0.0, 0.0, 0.5, -2.0, h);
  CHECK(h[0] == doctest::Approx(0.5));
  CHECK(h[1] == doctest::Approx(0.5 * std::exp(-2.0)));
  CHECK(h[2] == doctest::Approx(0.5 * std::exp(-10.0)));
  CHECK(sum == doctest::Approx(h[0] + h[1] + h[2]));
}

TEST_CASE("avx2 kernel agrees with the scalar reference") {
  if (!avx2_available()) {
    MESSAGE("CPU lacks AVX2/FMA; vector kernel not exercised");
    return;
  }
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> scale(0.05, 3.0);
  for (std::size_t n = 0; n <= 37; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> xs(n), ys(n), h_ref(n), h_vec(n);
      for (std::size_t j = 0; j < n; ++j) {
        xs[j] = coord(gen);
        ys[j] = coord(gen);
      }
      const double sx = coord(gen), sy = coord(gen);
      const double sigma = scale(gen);
      const double lambda0 = scale(gen);
      const double k = -1.0 / (2 * sigma * sigma);
      const double s_ref = hazard_row_scalar(xs.data(), ys.data(), n, sx, sy, lambda0, k, h_ref.data());
      const double s_vec = hazard_row_avx2(xs.data(), ys.data(), n, sx, sy, lambda0, k, h_vec.data());
      for (std::size_t j = 0; j < n; ++j) {
        // Both flush to zero at the bottom of the range; elsewhere a few ulps.
        if (h_ref[j] < 1e-300 || h_vec[j] < 1e-300) {
          CHECK(std::abs(h_ref[j] - h_vec[j]) < 1e-300);
        } else {
          CHECK(ulp_distance(h_ref[j], h_vec[j]) <= 4.0);
        }
      }
      CHECK(std::abs(s_ref - s_vec) <= 1e-14 * std::max(1.0, s_ref));
    }
  }
}

TEST_CASE("avx2 exp handles the extremes of its range") {
  if (!avx2_available()) return;
  const double xs[] = {0, 0, 0, 0, 0, 0, 0, 0};
  const double ys[] = {0, 1e-8, 1, 10, 26, 27, 40, 1e3};
  double h_ref[8], h_vec[8];
  hazard_row_scalar(xs, ys, 8, 0, 0, 1.0, -1.0, h_ref);
  hazard_row_avx2(xs, ys, 8, 0, 0, 1.0, -1.0, h_vec);
  CHECK(h_vec[0] == 1.0);
  for (int j = 0; j < 8; ++j) {
    CHECK(std::isfinite(h_vec[j]));
    CHECK(h_vec[j] >= 0.0);
    if (h_ref[j] > 1e-300) CHECK(ulp_distance(h_ref[j], h_vec[j]) <= 4.0);
  }
  CHECK(h_vec[7] == 0.0);
}

TEST_CASE("kernel selection") {
  CHECK(parse_choice("scalar") == KernelChoice::Scalar);
  CHECK(name(KernelChoice::Avx2) == "avx2");
  CHECK_THROWS_AS(parse_choice("neon"), Error);
  CHECK(select(KernelChoice::Scalar) == &hazard_row_scalar);
  if (avx2_available()) {
    CHECK(select(KernelChoice::Avx2) == &hazard_row_avx2);
  } else {
    CHECK_THROWS_AS(select(KernelChoice::Avx2), Error);
  }
  CHECK(resolved(KernelChoice::Scalar) == KernelChoice::Scalar);
  ::setenv("SCRID_KERNEL", "scalar", 1);
  CHECK(resolved(KernelChoice::Auto) == KernelChoice::Scalar);
  ::unsetenv("SCRID_KERNEL");
}
