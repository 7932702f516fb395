#include "smbp/math.hpp"

#include <cmath>
#include <stdexcept>

namespace smbp {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

// Acklam's rational approximation coefficients for the inverse normal CDF.
const double kA[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                      -2.759285104469687e+02, 1.383577518672690e+02,
                      -3.066479806614716e+01, 2.506628277459239e+00};
const double kB[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                      -1.556989798598866e+02, 6.680131188771972e+01,
                      -1.328068155288572e+01};
const double kC[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                      -2.400758277161838e+00, -2.549732539343734e+00,
                      4.374664141464968e+00,  2.938163982698783e+00};
const double kD[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                      2.445134137142996e+00, 3.754408661907416e+00};

double acklam(double p) {
  const double p_low = 0.02425;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q +
            kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q +
             kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r +
          kA[5]) *
         q /
         (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r +
          1.0);
}

}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in (0,1)");
  }
  double x = acklam(p);
  // one Halley step against the true CDF; the residual is tiny so the
  // correction is numerically safe
  double e = normal_cdf(x) - p;
  double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

TruncatedNormalMoments truncated_normal_moments(double lo, double hi,
                                                double center, double scale) {
  if (!(lo < hi) || !(scale > 0.0)) {
    throw std::invalid_argument("truncated_normal_moments: need lo < hi, scale > 0");
  }
  const double alpha = (lo - center) / scale;
  const double beta = (hi - center) / scale;
  const double z = normal_cdf(beta) - normal_cdf(alpha);
  const double pa = normal_pdf(alpha);
  const double pb = normal_pdf(beta);
  const double ratio = (pa - pb) / z;
  const double mean = center + scale * ratio;
  const double var_factor =
      1.0 + (alpha * pa - beta * pb) / z - ratio * ratio;
  const double sd = scale * std::sqrt(std::max(var_factor, 0.0));
  return {mean, sd};
}

}  // namespace smbp
