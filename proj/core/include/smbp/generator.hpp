#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "smbp/instance.hpp"
#include "smbp/rng.hpp"

namespace smbp {

enum class GenCase { Gaussian, Hoeffding, DistRobust };

char case_tag(GenCase c);
GenCase parse_case(const std::string& tag);

struct GeneratorConfig {
  int n = 0;
  double alpha = 0.0;  // chance constraint level, in (0,1)
  GenCase gen_case = GenCase::Gaussian;
  std::uint64_t seed = 0;
  double capacity = 72.0;
};

/**
 * Empirical item size histogram: interval k spans two consecutive quantiles
 * of [0, 72] and is drawn with the given weight.
 */
struct SizeHistogram {
  std::array<double, 8> edges;    // 0, 1, 2, 4, 8, 16, 32, 72
  std::array<double, 7> weights;  // percentages summing to 100
};

const SizeHistogram& item_size_histogram();

// two stage draw: interval by weight, then uniform within the interval
std::vector<double> sample_nominal_sizes(const GeneratorConfig& config,
                                         Xoshiro256& rng);

struct TruncGaussianParams {
  std::vector<double> a_lo;
  std::vector<double> a_hi;
  std::vector<double> scale;
  std::vector<double> mu_prime;     // truncated mean
  std::vector<double> sigma_prime;  // truncated standard deviation
};

// per item draws A_lo ~ U[0.3,0.6], A_hi ~ U[0.7,1.0], s ~ U[0.1,0.5]; the
// underlying normal is centered at the interval midpoint with scale s
TruncGaussianParams sample_truncated_gaussian_params(int n, Xoshiro256& rng);

// maps (mu, params) to (a, b, sigma) for the configured case
SmbpInstance build_case(const GeneratorConfig& config,
                        const std::vector<double>& mu,
                        const TruncGaussianParams& params);

// shrinks any item with a_i + sigma sqrt(b_i) > capacity onto the boundary:
// a_i scales by t and b_i by t^2 with t = capacity / (a_i + sigma sqrt(b_i))
SmbpInstance rescale_to_fit(SmbpInstance inst);

SmbpInstance generate_instance(const GeneratorConfig& config);

}  // namespace smbp
