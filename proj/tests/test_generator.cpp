#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "smbp/generator.hpp"
#include "smbp/math.hpp"

using namespace smbp;

TEST_CASE("generation is deterministic in the seed") {
  GeneratorConfig cfg;
  cfg.n = 40;
  cfg.alpha = 0.95;
  cfg.gen_case = GenCase::Gaussian;
  cfg.seed = 123;
  const auto first = generate_instance(cfg);
  const auto second = generate_instance(cfg);
  CHECK(first.a == second.a);
  CHECK(first.b == second.b);
  CHECK(first.sigma == second.sigma);
  cfg.seed = 124;
  const auto other = generate_instance(cfg);
  CHECK(first.a != other.a);
}

TEST_CASE("histogram sampling matches the interval weights") {
  const auto& hist = item_size_histogram();
  GeneratorConfig cfg;
  cfg.n = 1000000;
  cfg.seed = 12345;
  Xoshiro256 rng(cfg.seed);
  const auto mu = sample_nominal_sizes(cfg, rng);

  std::array<long, 7> counts{};
  for (double m : mu) {
    CHECK(m >= 0.0);
    CHECK(m <= 72.0);
    for (std::size_t k = 0; k < 7; ++k) {
      if (m >= hist.edges[k] && m < hist.edges[k + 1]) {
        ++counts[k];
        break;
      }
    }
  }
  // chi squared against the histogram; stay within three standard
  // deviations of the chi2(6) mean
  double chi2 = 0.0;
  for (std::size_t k = 0; k < 7; ++k) {
    const double expected = hist.weights[k] / 100.0 * cfg.n;
    chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
  }
  CHECK(chi2 < 6.0 + 3.0 * std::sqrt(12.0));
}

TEST_CASE("case parameters follow the chance constraint formulas") {
  GeneratorConfig cfg;
  cfg.n = 5;
  cfg.seed = 3;

  cfg.alpha = 0.95;
  cfg.gen_case = GenCase::Gaussian;
  CHECK(generate_instance(cfg).sigma ==
        doctest::Approx(1.6448536269514722).epsilon(1e-9));

  cfg.alpha = 0.99;
  cfg.gen_case = GenCase::Hoeffding;
  CHECK(generate_instance(cfg).sigma ==
        doctest::Approx(std::sqrt(-0.5 * std::log(0.01))).epsilon(1e-12));

  cfg.gen_case = GenCase::DistRobust;
  CHECK(generate_instance(cfg).sigma ==
        doctest::Approx(std::sqrt(99.0)).epsilon(1e-12));
}

TEST_CASE("uncertainty coefficients per case") {
  GeneratorConfig cfg;
  cfg.n = 30;
  cfg.alpha = 0.9;
  cfg.seed = 9;

  Xoshiro256 rng(cfg.seed);
  const auto mu = sample_nominal_sizes(cfg, rng);
  const auto params = sample_truncated_gaussian_params(cfg.n, rng);

  for (int i = 0; i < cfg.n; ++i) {
    CHECK(params.a_lo[i] >= 0.3);
    CHECK(params.a_lo[i] <= 0.6);
    CHECK(params.a_hi[i] >= 0.7);
    CHECK(params.a_hi[i] <= 1.0);
    CHECK(params.mu_prime[i] ==
          doctest::Approx(0.5 * (params.a_lo[i] + params.a_hi[i]))
              .epsilon(1e-9));
    CHECK(params.sigma_prime[i] <= (params.a_hi[i] - params.a_lo[i]) / 2.0);
  }

  cfg.gen_case = GenCase::Gaussian;
  auto gauss = build_case(cfg, mu, params);
  cfg.gen_case = GenCase::Hoeffding;
  auto hoeff = build_case(cfg, mu, params);
  for (int i = 0; i < cfg.n; ++i) {
    CHECK(gauss.a[i] == doctest::Approx(params.mu_prime[i] * mu[i]));
    CHECK(gauss.b[i] ==
          doctest::Approx(std::pow(params.sigma_prime[i] * mu[i], 2)));
    CHECK(hoeff.a[i] == gauss.a[i]);
    CHECK(hoeff.b[i] ==
          doctest::Approx(
              std::pow((params.a_hi[i] - params.a_lo[i]) * mu[i], 2)));
  }
}

TEST_CASE("rescaling clamps oversized items onto the capacity boundary") {
  SmbpInstance inst;
  inst.n = 3;
  inst.capacity = 72.0;
  inst.sigma = 1.0;
  inst.a = {80.0, 0.0, 10.0};
  inst.b = {0.0, 10000.0, 4.0};
  const auto scaled = rescale_to_fit(inst);
  CHECK(scaled.a[0] == doctest::Approx(72.0));
  CHECK(scaled.b[1] == doctest::Approx(5184.0));  // 72^2
  CHECK(scaled.a[2] == 10.0);                     // already fits, untouched
  CHECK(scaled.b[2] == 4.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(scaled.a[i] + scaled.sigma * std::sqrt(scaled.b[i]) <=
          inst.capacity + kFeasTol);
  }
  // idempotent
  const auto twice = rescale_to_fit(scaled);
  CHECK(twice.a == scaled.a);
  CHECK(twice.b == scaled.b);
}

TEST_CASE("generated instances validate and carry meta") {
  for (auto gc : {GenCase::Gaussian, GenCase::Hoeffding, GenCase::DistRobust}) {
    GeneratorConfig cfg;
    cfg.n = 25;
    cfg.alpha = 0.99;
    cfg.gen_case = gc;
    cfg.seed = 21;
    const auto inst = generate_instance(cfg);
    CHECK_NOTHROW(validate_instance(inst));
    REQUIRE(inst.meta.has_value());
    CHECK(inst.meta->case_tag == std::string(1, case_tag(gc)));
    CHECK(inst.meta->alpha == 0.99);
    CHECK(inst.meta->seed == 21);
    CHECK(inst.capacity == 72.0);
  }
}

TEST_CASE("gaussian case requires alpha at least one half") {
  GeneratorConfig cfg;
  cfg.n = 4;
  cfg.alpha = 0.3;
  cfg.gen_case = GenCase::Gaussian;
  cfg.seed = 1;
  CHECK_THROWS_AS(generate_instance(cfg), std::invalid_argument);
}
