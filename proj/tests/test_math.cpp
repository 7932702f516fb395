#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "smbp/math.hpp"
#include "smbp/rng.hpp"

using namespace smbp;

namespace {

// Simpson quadrature of the truncated normal moments, used as the
// independent oracle for the closed form implementation
TruncatedNormalMoments quadrature_moments(double lo, double hi, double center,
                                          double scale) {
  const int steps = 20000;  // even
  const double h = (hi - lo) / steps;
  double z = 0.0, m1 = 0.0, m2 = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double x = lo + k * h;
    const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    const double pdf = normal_pdf((x - center) / scale) / scale;
    z += w * pdf;
    m1 += w * pdf * x;
    m2 += w * pdf * x * x;
  }
  const double mean = m1 / z;
  const double var = m2 / z - mean * mean;
  return {mean, std::sqrt(std::max(var, 0.0))};
}

}  // namespace

TEST_CASE("normal quantile matches reference values") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.95) ==
        doctest::Approx(1.6448536269514722).epsilon(1e-10));
  CHECK(normal_quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(normal_quantile(0.99) ==
        doctest::Approx(2.3263478740408408).epsilon(1e-10));
  CHECK(normal_quantile(0.999) ==
        doctest::Approx(3.090232306167813).epsilon(1e-10));
}

TEST_CASE("normal quantile inverts the CDF and is antisymmetric") {
  for (double p = 0.001; p < 1.0; p += 0.0137) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
    CHECK(normal_quantile(p) ==
          doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(-0.2), std::domain_error);
}

TEST_CASE("truncated normal moments agree with quadrature") {
  Xoshiro256 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const double lo = rng.uniform(0.3, 0.6);
    const double hi = rng.uniform(0.7, 1.0);
    const double scale = rng.uniform(0.1, 0.5);
    const double center = 0.5 * (lo + hi);
    const auto closed = truncated_normal_moments(lo, hi, center, scale);
    const auto quad = quadrature_moments(lo, hi, center, scale);
    CHECK(closed.mean == doctest::Approx(quad.mean).epsilon(1e-8));
    CHECK(closed.sd == doctest::Approx(quad.sd).epsilon(1e-8));
    // spread on an interval can never exceed half its width
    CHECK(closed.sd <= (hi - lo) / 2.0);
    // symmetric truncation keeps the mean at the center
    CHECK(closed.mean == doctest::Approx(center).epsilon(1e-9));
  }
}

TEST_CASE("truncated normal limit behavior") {
  // very wide scale approaches the uniform distribution on [lo, hi]
  const auto wide = truncated_normal_moments(0.0, 1.0, 0.5, 1e4);
  CHECK(wide.mean == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(wide.sd == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-4));
  // very small scale is effectively untruncated
  const auto tight = truncated_normal_moments(0.0, 1.0, 0.5, 0.01);
  CHECK(tight.mean == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(tight.sd == doctest::Approx(0.01).epsilon(1e-6));
  CHECK_THROWS_AS(truncated_normal_moments(1.0, 0.0, 0.5, 0.1),
                  std::invalid_argument);
}

TEST_CASE("xoshiro stream is deterministic and uniform-ish") {
  Xoshiro256 r1(42), r2(42), r3(43);
  double sum = 0.0;
  bool differs = false;
  for (int i = 0; i < 10000; ++i) {
    const double u = r1.uniform01();
    CHECK(u == r2.uniform01());
    if (u != r3.uniform01()) differs = true;
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(differs);
  CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.02));
}
