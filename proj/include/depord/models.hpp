#pragma once

#include <cstdint>
#include <vector>

#include "depord/dist_core.hpp"
#include "depord/reduce.hpp"
#include "depord/verdict.hpp"

namespace depord {

// ---------------------------------------------------------------------------
// Bivariate Bernoulli

/// p = P(X=1), q = P(Y=1), alpha = P(Y=0 | X=0), beta = P(Y=0 | X=1).
struct BernoulliParams {
  double p = 0.5;
  double q = 0.5;
  double alpha = 0.5;
  double beta = 0.5;

  /// Throws InputError unless p, q in (0,1), alpha, beta in [0,1] and
  /// (1-p)(1-alpha) + p(1-beta) = q within 1e-12.
  void validate() const;
  /// beta implied by (p, q, alpha).
  static BernoulliParams from_alpha(double p, double q, double alpha);
};

ComparisonResult bernoulli_ccx(const BernoulliParams& a, const BernoulliParams& b, double tol = kProbSumTol);

struct BernoulliClass {
  bool independent = false;
  bool perfect = false;
  bool comonotone = false;
  bool countermonotone = false;
  bool none() const { return !independent && !perfect && !comonotone && !countermonotone; }
};

BernoulliClass bernoulli_classify(const BernoulliParams& b, double tol = kProbSumTol);

/// Two cells with weights (1-p, p) and conditional cdf rows (alpha, beta), (1, 1).
ConditionalModel bernoulli_to_model(const BernoulliParams& b);

// ---------------------------------------------------------------------------
// Multivariate normal

/// Law of (Y, X_1..X_p); Y is coordinate 0.
struct GaussianSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  /// Shape, symmetry (1e-10) and sigma_Y^2 > 0; throws InputError / DegenerateError.
  void validate() const;
  /// Y with p predictors, all pairwise correlations rho, unit variances.
  static GaussianSpec equicorrelated(int p, double rho);
};

/// Sigma_YX Sigma_X^- Sigma_XY / sigma_Y^2 with a spectral pseudoinverse.
double gaussian_r2(const GaussianSpec& s);

/// Compares explained-variance ratios; never Incomparable or MarginalMismatch.
ComparisonResult gaussian_ccx(const GaussianSpec& a, const GaussianSpec& b, double tol = kDefaultTol);

struct DiscretizeOptions {
  int n_cells = 50;
  int n_levels = 50;
  /// 0 uses exact bivariate normal rectangle probabilities.
  std::int64_t mc_samples = 0;
  std::uint64_t seed = 0;
};

/// Finite model of (Y, S) with S the sufficient linear score of X; cells and
/// Y levels are equal-probability normal quantile bins.
ConditionalModel gaussian_discretize(const GaussianSpec& s, const DiscretizeOptions& opts = {});

/// Counter-based generator: the i-th draw for a seed, independent of call order.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index);

// ---------------------------------------------------------------------------
// Additive error models Y = f(X) + sigma * eps

enum class NoiseShape { Normal, Uniform, ShiftedExponential };

/// `atoms` equal-probability quantile midpoints of N(0,1), U(-1,1) or Exp(1)-1.
DiscreteMarginal noise_law(NoiseShape shape, int atoms);

/// Model of (f(X) + sigma * eps, f(X)) with each eps atom spread uniformly over
/// its Voronoi cell, so F_Y is continuous; Y is cut at the levels j/n_levels.
/// sigma = 0 gives the perfectly dependent model on the same levels.
ConditionalModel additive_error_model(const DiscreteMarginal& f_values, const DiscreteMarginal& eps, double sigma,
                                      int n_levels);

/// ccx_compare(model(sigma_{i+1}), model(sigma_i)) for consecutive sigmas.
std::vector<ComparisonResult> additive_error_verify(const DiscreteMarginal& f_values, const DiscreteMarginal& eps,
                                                    const std::vector<double>& sigmas, int n_levels,
                                                    double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// SI copulas

/// Pointwise lower-orthant comparison of two SI grids with equal-probability
/// Y. A LessEq here implies ccx LessEq; criterion is reported as "sufficient".
ComparisonResult si_copula_ccx(const BivariateSIGrid& a, const BivariateSIGrid& b, double tol = kDefaultTol);

}  // namespace depord
