#include "smbp/generator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "smbp/math.hpp"

namespace smbp {

char case_tag(GenCase c) {
  switch (c) {
    case GenCase::Gaussian:
      return 'G';
    case GenCase::Hoeffding:
      return 'H';
    case GenCase::DistRobust:
      return 'D';
  }
  return '?';
}

GenCase parse_case(const std::string& tag) {
  if (tag == "G") return GenCase::Gaussian;
  if (tag == "H") return GenCase::Hoeffding;
  if (tag == "D") return GenCase::DistRobust;
  throw std::invalid_argument("unknown case tag '" + tag + "' (want G, H or D)");
}

const SizeHistogram& item_size_histogram() {
  static const SizeHistogram hist = {
      {0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 72.0},
      {36.3, 13.8, 21.3, 23.1, 3.5, 1.9, 0.1}};
  return hist;
}

std::vector<double> sample_nominal_sizes(const GeneratorConfig& config,
                                         Xoshiro256& rng) {
  const SizeHistogram& hist = item_size_histogram();
  std::vector<double> mu(config.n);
  for (int i = 0; i < config.n; ++i) {
    double u = rng.uniform(0.0, 100.0);
    std::size_t k = 0;
    double acc = 0.0;
    for (; k + 1 < hist.weights.size(); ++k) {
      acc += hist.weights[k];
      if (u < acc) break;
    }
    mu[i] = rng.uniform(hist.edges[k], hist.edges[k + 1]);
  }
  return mu;
}

TruncGaussianParams sample_truncated_gaussian_params(int n, Xoshiro256& rng) {
  TruncGaussianParams p;
  p.a_lo.resize(n);
  p.a_hi.resize(n);
  p.scale.resize(n);
  p.mu_prime.resize(n);
  p.sigma_prime.resize(n);
  for (int i = 0; i < n; ++i) {
    p.a_lo[i] = rng.uniform(0.3, 0.6);
    p.a_hi[i] = rng.uniform(0.7, 1.0);
    p.scale[i] = rng.uniform(0.1, 0.5);
    const double center = 0.5 * (p.a_lo[i] + p.a_hi[i]);
    const auto m =
        truncated_normal_moments(p.a_lo[i], p.a_hi[i], center, p.scale[i]);
    p.mu_prime[i] = m.mean;
    p.sigma_prime[i] = m.sd;
  }
  return p;
}

SmbpInstance build_case(const GeneratorConfig& config,
                        const std::vector<double>& mu,
                        const TruncGaussianParams& params) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("generator: alpha must lie in (0,1)");
  }
  SmbpInstance inst;
  inst.n = config.n;
  inst.capacity = config.capacity;
  inst.a.resize(config.n);
  inst.b.resize(config.n);
  switch (config.gen_case) {
    case GenCase::Gaussian:
      inst.sigma = normal_quantile(config.alpha);
      break;
    case GenCase::Hoeffding:
      inst.sigma = std::sqrt(-0.5 * std::log(1.0 - config.alpha));
      break;
    case GenCase::DistRobust:
      inst.sigma = std::sqrt(config.alpha / (1.0 - config.alpha));
      break;
  }
  // alpha < 0.5 would give a negative Gaussian multiplier; the chance
  // constraint is only meaningful for alpha >= 1/2 anyway
  if (inst.sigma < 0.0) {
    throw std::invalid_argument("generator: Gaussian case needs alpha >= 0.5");
  }
  for (int i = 0; i < config.n; ++i) {
    inst.a[i] = params.mu_prime[i] * mu[i];
    if (config.gen_case == GenCase::Hoeffding) {
      const double width = (params.a_hi[i] - params.a_lo[i]) * mu[i];
      inst.b[i] = width * width;
    } else {
      const double dev = params.sigma_prime[i] * mu[i];
      inst.b[i] = dev * dev;
    }
  }
  inst.meta = InstanceMeta{std::string(1, case_tag(config.gen_case)),
                           config.alpha, config.seed};
  return inst;
}

SmbpInstance rescale_to_fit(SmbpInstance inst) {
  for (int i = 0; i < inst.n; ++i) {
    const double usage = inst.a[i] + inst.sigma * std::sqrt(inst.b[i]);
    if (usage > inst.capacity) {
      const double t = inst.capacity / usage;
      inst.a[i] *= t;
      inst.b[i] *= t * t;
    }
  }
  return inst;
}

SmbpInstance generate_instance(const GeneratorConfig& config) {
  if (config.n <= 0) {
    throw std::invalid_argument("generator: n must be positive");
  }
  Xoshiro256 rng(config.seed);
  const auto mu = sample_nominal_sizes(config, rng);
  const auto params = sample_truncated_gaussian_params(config.n, rng);
  SmbpInstance inst = rescale_to_fit(build_case(config, mu, params));
  validate_instance(inst);
  return inst;
}

}  // namespace smbp
