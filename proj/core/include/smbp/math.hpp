#pragma once

namespace smbp {

// standard normal density
double normal_pdf(double x);

// standard normal CDF, computed through erfc for accuracy in the tails
double normal_cdf(double x);

/**
 * Inverse standard normal CDF.  Rational approximation (Acklam) with one
 * Halley refinement step, giving close to full double precision on (0,1).
 * Throws std::domain_error outside (0,1).
 */
double normal_quantile(double p);

struct TruncatedNormalMoments {
  double mean;
  double sd;
};

/**
 * Mean and standard deviation of a normal(center, scale^2) variable
 * truncated to [lo, hi].  Requires lo < hi and scale > 0.  The standard
 * deviation is always below (hi - lo) / 2 (a distribution supported on an
 * interval cannot spread wider than that).
 */
TruncatedNormalMoments truncated_normal_moments(double lo, double hi,
                                                double center, double scale);

}  // namespace smbp
