#pragma once

namespace depord::normal {

/// Standard normal density.
double pdf(double x);
/// Standard normal cdf via erfc (accurate in both tails).
double cdf(double x);
/// Standard normal quantile: rational initial guess refined by Halley steps.
/// Returns -inf / +inf at p = 0 / 1; throws std::domain_error outside [0, 1].
double quantile(double p);
/// P(X <= h, Y <= k) for a standard bivariate normal with correlation rho.
/// Genz's adaptation of the Drezner-Wesolowsky method (double precision).
double bivariate_cdf(double h, double k, double rho);

}  // namespace depord::normal
