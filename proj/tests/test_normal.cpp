#include <doctest.h>

#include <cmath>
#include <numbers>

#include "depord/normal.hpp"

using namespace depord;

TEST_CASE("normal cdf and quantile") {
  CHECK(normal::cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal::cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
  CHECK(normal::cdf(-8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-10));
  for (double p : {1e-12, 1e-6, 0.01, 0.2, 0.5, 0.77, 0.999, 1 - 1e-9})
    CHECK(normal::cdf(normal::quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  CHECK(std::isinf(normal::quantile(0.0)));
  CHECK(std::isinf(normal::quantile(1.0)));
  CHECK_THROWS_AS(normal::quantile(1.5), std::domain_error);
}

namespace {
// Independent check: integrate the conditional cdf along x with Simpson's rule.
double bvn_by_quadrature(double h, double k, double rho) {
  const double lo = -9.0;
  const double hi = std::min(h, 9.0);
  const int n = 4000;
  const double step = (hi - lo) / n;
  const double c = std::sqrt(1 - rho * rho);
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * step;
    const double f = normal::pdf(x) * normal::cdf((k - rho * x) / c);
    acc += (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2)) * f;
  }
  return acc * step / 3;
}
}  // namespace

TEST_CASE("bivariate normal cdf") {
  CHECK(normal::bivariate_cdf(0, 0, 0.5) == doctest::Approx(0.25 + std::asin(0.5) / (2 * std::numbers::pi)).epsilon(1e-14));
  CHECK(normal::bivariate_cdf(0, 0, -0.9) == doctest::Approx(0.25 + std::asin(-0.9) / (2 * std::numbers::pi)).epsilon(1e-13));
  for (double rho : {-0.95, -0.6, -0.2, 0.0, 0.3, 0.7, 0.95})
    for (double h : {-2.0, -0.5, 0.3, 1.7})
      for (double k : {-1.2, 0.0, 2.2})
        CHECK(normal::bivariate_cdf(h, k, rho) == doctest::Approx(bvn_by_quadrature(h, k, rho)).epsilon(1e-9));
  CHECK(normal::bivariate_cdf(0.4, -0.3, 0.0) == doctest::Approx(normal::cdf(0.4) * normal::cdf(-0.3)));
  CHECK(normal::bivariate_cdf(0.4, -0.3, 1.0) == doctest::Approx(normal::cdf(-0.3)));
  CHECK(normal::bivariate_cdf(0.4, -0.3, -1.0) == doctest::Approx(std::max(0.0, normal::cdf(0.4) + normal::cdf(-0.3) - 1)));
  CHECK(normal::bivariate_cdf(INFINITY, 0.7, 0.4) == doctest::Approx(normal::cdf(0.7)));
  CHECK(normal::bivariate_cdf(-INFINITY, 0.7, 0.4) == 0.0);
  CHECK_THROWS_AS(normal::bivariate_cdf(0, 0, 1.5), std::domain_error);
}
