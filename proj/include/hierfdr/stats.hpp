#ifndef HIERFDR_STATS_HPP
#define HIERFDR_STATS_HPP

#include <cstddef>

// Distribution functions used across the library. All return probabilities
// in [0,1] and throw std::invalid_argument on out-of-domain arguments.

namespace hfdr::stats {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal survival function 1 - Phi(x), accurate in the far tail.
double normal_sf(double x);

/// Standard normal quantile, p in (0,1). Halley-refined to full double
/// precision against normal_cdf.
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double lower_gamma_reg(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double upper_gamma_reg(double a, double x);

/// Chi-square survival function P(X > x) with `dof` degrees of freedom.
/// Series/continued-fraction evaluation, relative accuracy ~1e-14.
double chi2_sf(double x, double dof);

/// Regularized incomplete beta I_x(a, b), relative accuracy ~1e-13.
double ibeta(double a, double b, double x);

/// Two-sided Student-t p-value: 2 * P(T_dof > |t|).
double student_sf_two_sided(double t, double dof);

} // namespace hfdr::stats

#endif
