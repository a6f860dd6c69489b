#pragma once

namespace blm {

/// log Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 coefficients).
/// Relative error below 1e-13 over the range used by the library.
double log_gamma(double x);

/// Regularized incomplete beta function I_x(a, b) for a,b > 0, x in [0,1].
double incomplete_beta(double a, double b, double x);

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile, |error| < 1e-13 via rational approximation plus
/// one Newton correction. Throws DomainError for p outside (0,1).
double normal_quantile(double p);

}  // namespace blm
