#include "depord/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "depord/ccx.hpp"
#include "depord/normal.hpp"

namespace depord {
namespace {

ComparisonResult verdict_only(Verdict v, double tol) {
  ComparisonResult out;
  out.verdict = v;
  out.tol = tol;
  return out;
}

double unit_uniform(std::uint64_t seed, std::uint64_t index) {
  // 53 high bits mapped into (0, 1).
  return (static_cast<double>(counter_hash(seed, index) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bernoulli

void BernoulliParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw InputError("Bernoulli p must lie in (0, 1)");
  if (!(q > 0.0 && q < 1.0)) throw InputError("Bernoulli q must lie in (0, 1)");
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0))
    throw InputError("Bernoulli alpha and beta must lie in [0, 1]");
  if (std::abs((1.0 - p) * (1.0 - alpha) + p * (1.0 - beta) - q) > kProbSumTol)
    throw InputError("Bernoulli parameters inconsistent: (1-p)(1-alpha) + p(1-beta) != q");
}

BernoulliParams BernoulliParams::from_alpha(double p, double q, double alpha) {
  BernoulliParams b{p, q, alpha, 1.0 - (q - (1.0 - p) * (1.0 - alpha)) / p};
  if (b.beta < 0.0 && b.beta > -kProbSumTol) b.beta = 0.0;
  if (b.beta > 1.0 && b.beta < 1.0 + kProbSumTol) b.beta = 1.0;
  b.validate();
  return b;
}

ComparisonResult bernoulli_ccx(const BernoulliParams& a, const BernoulliParams& b, double tol) {
  a.validate();
  b.validate();
  if (std::abs(a.q - b.q) > kClosureTol) return verdict_only(Verdict::MarginalMismatch, tol);
  const double lo_a = std::min(a.alpha, a.beta);
  const double hi_a = std::max(a.alpha, a.beta);
  const double lo_b = std::min(b.alpha, b.beta);
  const double hi_b = std::max(b.alpha, b.beta);
  const bool leq = lo_b <= lo_a + tol && hi_a <= hi_b + tol;
  const bool geq = lo_a <= lo_b + tol && hi_b <= hi_a + tol;
  auto out = verdict_only(leq && geq ? Verdict::Equal
                          : leq      ? Verdict::LessEq
                          : geq      ? Verdict::GreaterEq
                                     : Verdict::Incomparable,
                          tol);
  out.per_level.push_back({1.0 - a.q, out.verdict, std::max({0.0, lo_b - lo_a, hi_a - hi_b}),
                           std::max({0.0, lo_a - lo_b, hi_b - hi_a})});
  if (out.verdict == Verdict::Incomparable) {
    // The interval [lo, hi] of one side sticks out of the other's at an endpoint.
    out.witness = Witness{1.0 - a.q, 0.0, hi_a, hi_b};
    out.reverse_witness = Witness{1.0 - a.q, 0.0, hi_b, hi_a};
  }
  return out;
}

BernoulliClass bernoulli_classify(const BernoulliParams& b, double tol) {
  b.validate();
  BernoulliClass c;
  c.independent = std::abs(b.alpha - b.beta) <= tol;
  c.perfect = std::min(b.alpha, b.beta) <= tol && std::max(b.alpha, b.beta) >= 1.0 - tol;
  c.comonotone = std::abs(b.alpha - std::min((1.0 - b.q) / (1.0 - b.p), 1.0)) <= tol;
  c.countermonotone = std::abs(b.alpha - std::max(0.0, 1.0 - b.q / (1.0 - b.p))) <= tol;
  return c;
}

ConditionalModel bernoulli_to_model(const BernoulliParams& b) {
  b.validate();
  Eigen::MatrixXd f(2, 2);
  f << b.alpha, b.beta, 1.0, 1.0;
  return {DiscreteMarginal(Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(1.0 - b.q, b.q)), Eigen::Vector2d(1.0 - b.p, b.p),
          std::move(f)};
}

// ---------------------------------------------------------------------------
// Gaussian

void GaussianSpec::validate() const {
  const auto d = cov.rows();
  if (d < 2 || cov.cols() != d) throw InputError("Gaussian cov must be square with at least 2 coordinates");
  if (mean.size() != d) throw InputError("Gaussian mean length must match cov");
  if (!cov.allFinite() || !mean.allFinite()) throw InputError("Gaussian spec contains a non-finite value");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10) throw InputError("Gaussian cov must be symmetric");
  if (!(cov(0, 0) > 0.0)) throw DegenerateError("Gaussian Y variance must be positive");
}

GaussianSpec GaussianSpec::equicorrelated(int p, double rho) {
  if (p < 1) throw InputError("need at least one predictor");
  GaussianSpec s;
  s.mean = Eigen::VectorXd::Zero(p + 1);
  s.cov = Eigen::MatrixXd::Constant(p + 1, p + 1, rho);
  s.cov.diagonal().setOnes();
  return s;
}

double gaussian_r2(const GaussianSpec& s) {
  s.validate();
  const auto p = s.cov.rows() - 1;
  const Eigen::MatrixXd sx = s.cov.bottomRightCorner(p, p);
  const Eigen::VectorXd sxy = s.cov.col(0).tail(p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sx);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double top = lam.cwiseAbs().maxCoeff();
  if (!(top > 0.0)) return 0.0;
  if (lam.minCoeff() < -1e-10 * top) throw InputError("Gaussian predictor covariance is not positive semidefinite");
  const Eigen::VectorXd proj = eig.eigenvectors().transpose() * sxy;
  double r2 = 0.0;
  for (Eigen::Index i = 0; i < p; ++i)
    if (lam(i) > 1e-10 * top) r2 += proj(i) * proj(i) / lam(i);
  r2 /= s.cov(0, 0);
  if (r2 > 1.0 + 1e-9) throw InputError("Gaussian covariance is not positive semidefinite (r^2 > 1)");
  return std::clamp(r2, 0.0, 1.0);
}

ComparisonResult gaussian_ccx(const GaussianSpec& a, const GaussianSpec& b, double tol) {
  const double ra = gaussian_r2(a);
  const double rb = gaussian_r2(b);
  auto out = verdict_only(verdict_from_excess(ra - rb, rb - ra, tol), tol);
  out.per_level.push_back({0.5, out.verdict, std::max(ra - rb, 0.0), std::max(rb - ra, 0.0)});
  return out;
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index) {
  // SplitMix64 finaliser applied to a (seed, index) counter.
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + (index + 1) * 0xD1B54A32D192ED03ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ConditionalModel gaussian_discretize(const GaussianSpec& s, const DiscretizeOptions& opts) {
  if (opts.n_cells < 1 || opts.n_levels < 2) throw InputError("need n_cells >= 1 and n_levels >= 2");
  if (opts.mc_samples < 0) throw InputError("mc_samples must be nonnegative");
  const double rho = std::sqrt(gaussian_r2(s));
  const double mu = s.mean(0);
  const double sd = std::sqrt(s.cov(0, 0));
  const int n = opts.n_cells;
  const int m = opts.n_levels;
  Eigen::VectorXd cut_x(n + 1);
  for (int i = 0; i <= n; ++i) cut_x(i) = normal::quantile(static_cast<double>(i) / n);
  Eigen::VectorXd cut_y(m + 1);
  for (int j = 0; j <= m; ++j) cut_y(j) = normal::quantile(static_cast<double>(j) / m);
  Eigen::VectorXd atoms(m);
  for (int j = 0; j < m; ++j) atoms(j) = mu + sd * normal::quantile((j + 0.5) / m);

  if (opts.mc_samples == 0) {
    Eigen::MatrixXd f(m, n);
    for (int i = 0; i < n; ++i) {
      double prev = 0.0;
      for (int j = 0; j + 1 < m; ++j) {
        const double rect = normal::bivariate_cdf(cut_y(j + 1), cut_x(i + 1), rho) -
                            normal::bivariate_cdf(cut_y(j + 1), cut_x(i), rho);
        prev = std::clamp(std::max(prev, rect * n), 0.0, 1.0);
        f(j, i) = prev;
      }
      f(m - 1, i) = 1.0;
    }
    return {DiscreteMarginal::uniform(atoms), Eigen::VectorXd::Constant(n, 1.0 / n), std::move(f)};
  }

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(m, n);
  const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  for (std::int64_t t = 0; t < opts.mc_samples; ++t) {
    const auto base = static_cast<std::uint64_t>(t) * 2;
    const double r = std::sqrt(-2.0 * std::log(unit_uniform(opts.seed, base)));
    const double a = 2.0 * std::numbers::pi * unit_uniform(opts.seed, base + 1);
    const double z1 = r * std::cos(a);
    const double z2 = r * std::sin(a);
    const double score = rho * z1 + c * z2;
    const auto bin = [](const Eigen::VectorXd& cuts, double x) {
      const auto pos = std::upper_bound(cuts.data() + 1, cuts.data() + cuts.size() - 1, x) - (cuts.data() + 1);
      return static_cast<Eigen::Index>(pos);
    };
    counts(bin(cut_y, z1), bin(cut_x, score)) += 1.0;
  }
  std::vector<Eigen::Index> rows;
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < m; ++j)
    if (counts.row(j).sum() > 0) rows.push_back(j);
  for (Eigen::Index i = 0; i < n; ++i)
    if (counts.col(i).sum() > 0) cols.push_back(i);
  Eigen::MatrixXd kept = counts(rows, cols);
  Eigen::VectorXd kept_atoms = atoms(rows);
  kept /= kept.sum();
  return ConditionalModel::from_joint(kept_atoms, kept);
}

// ---------------------------------------------------------------------------
// Additive error

DiscreteMarginal noise_law(NoiseShape shape, int atoms) {
  if (atoms < 2) throw InputError("noise law needs at least 2 atoms");
  Eigen::VectorXd a(atoms);
  for (int l = 0; l < atoms; ++l) {
    const double u = (l + 0.5) / atoms;
    switch (shape) {
      case NoiseShape::Normal:
        a(l) = normal::quantile(u);
        break;
      case NoiseShape::Uniform:
        a(l) = 2.0 * u - 1.0;
        break;
      case NoiseShape::ShiftedExponential:
        a(l) = -std::log1p(-u) - 1.0;
        break;
    }
  }
  return DiscreteMarginal::uniform(std::move(a));
}

namespace {

// Continuous law of sigma * eps_smooth shifted by each f atom: the cdf of every
// cell is piecewise linear with knots at f_k + sigma * (Voronoi ends of eps).
struct SmoothedMixture {
  Eigen::VectorXd shift, cell_w;  // f atoms, probs
  Eigen::VectorXd lo, len, q;     // scaled Voronoi cells of eps and their masses

  double cell_cdf(Eigen::Index k, double t) const {
    double acc = 0.0;
    for (Eigen::Index l = 0; l < q.size(); ++l)
      acc += q(l) * std::clamp((t - shift(k) - lo(l)) / len(l), 0.0, 1.0);
    return acc;
  }
  double cdf(double t) const {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < shift.size(); ++k) acc += cell_w(k) * cell_cdf(k, t);
    return acc;
  }
};

}  // namespace

ConditionalModel additive_error_model(const DiscreteMarginal& f_values, const DiscreteMarginal& eps, double sigma,
                                      int n_levels) {
  if (n_levels < 2) throw InputError("n_levels must be at least 2");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("sigma must be finite and nonnegative");
  const Eigen::VectorXd probs = Eigen::VectorXd::Constant(n_levels, 1.0 / n_levels);
  if (sigma == 0.0) {
    // Perfect dependence on the shared level grid.
    Eigen::MatrixXd f(n_levels, n_levels);
    for (int j = 0; j < n_levels; ++j)
      for (int i = 0; i < n_levels; ++i) f(j, i) = i <= j ? 1.0 : 0.0;
    return {DiscreteMarginal(Eigen::VectorXd::LinSpaced(n_levels, 1, n_levels), probs), probs, std::move(f)};
  }
  if (eps.size() < 2) throw InputError("noise law needs at least 2 atoms");

  SmoothedMixture mix;
  mix.shift = f_values.atoms();
  mix.cell_w = f_values.probs();
  const auto& e = eps.atoms();
  const auto L = e.size();
  mix.lo.resize(L);
  mix.len.resize(L);
  mix.q = eps.probs();
  for (Eigen::Index l = 0; l < L; ++l) {
    const double left = l == 0 ? e(0) - 0.5 * (e(1) - e(0)) : 0.5 * (e(l - 1) + e(l));
    const double right = l + 1 == L ? e(L - 1) + 0.5 * (e(L - 1) - e(L - 2)) : 0.5 * (e(l) + e(l + 1));
    mix.lo(l) = sigma * left;
    mix.len(l) = sigma * (right - left);
  }

  std::vector<double> knots;
  for (Eigen::Index k = 0; k < mix.shift.size(); ++k)
    for (Eigen::Index l = 0; l < L; ++l) {
      knots.push_back(mix.shift(k) + mix.lo(l));
      knots.push_back(mix.shift(k) + mix.lo(l) + mix.len(l));
    }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<double> at(knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) at[i] = mix.cdf(knots[i]);

  // Thresholds t_j with F_Y(t_j) = j / n_levels; F_Y is linear between knots.
  Eigen::VectorXd atoms(n_levels);
  Eigen::MatrixXd f(n_levels, mix.shift.size());
  for (int j = 1; j < n_levels; ++j) {
    const double v = static_cast<double>(j) / n_levels;
    const auto pos = static_cast<std::size_t>(std::lower_bound(at.begin(), at.end(), v) - at.begin());
    double t = knots[std::min(pos, knots.size() - 1)];
    if (pos > 0 && pos < knots.size() && at[pos] > at[pos - 1])
      t = knots[pos - 1] + (v - at[pos - 1]) / (at[pos] - at[pos - 1]) * (knots[pos] - knots[pos - 1]);
    atoms(j - 1) = t;
    for (Eigen::Index k = 0; k < mix.shift.size(); ++k) f(j - 1, k) = mix.cell_cdf(k, t);
  }
  atoms(n_levels - 1) = knots.back();
  f.row(n_levels - 1).setOnes();
  return {DiscreteMarginal(std::move(atoms), probs), f_values.probs(), std::move(f)};
}

std::vector<ComparisonResult> additive_error_verify(const DiscreteMarginal& f_values, const DiscreteMarginal& eps,
                                                    const std::vector<double>& sigmas, int n_levels, double tol) {
  for (std::size_t i = 1; i < sigmas.size(); ++i)
    if (!(sigmas[i] > sigmas[i - 1])) throw InputError("sigmas must be strictly ascending");
  std::vector<ConditionalModel> models;
  models.reserve(sigmas.size());
  for (double s : sigmas) models.push_back(additive_error_model(f_values, eps, s, n_levels));
  std::vector<ComparisonResult> out;
  for (std::size_t i = 1; i < models.size(); ++i) out.push_back(ccx_compare(models[i], models[i - 1], tol));
  return out;
}

// ---------------------------------------------------------------------------
// SI copulas

ComparisonResult si_copula_ccx(const BivariateSIGrid& a, const BivariateSIGrid& b, double tol) {
  if (!verify_si(a, tol) || !verify_si(b, tol)) throw InputError("si_copula_ccx needs SI grids");
  for (const auto* g : {&a, &b}) {
    const double unit = 1.0 / static_cast<double>(g->y.size());
    if ((g->y.probs().array() - unit).abs().maxCoeff() > kProbSumTol)
      throw InputError("si_copula_ccx needs equal-probability Y levels");
  }
  auto out = concordance_leq(a, b, tol);
  out.criterion = "sufficient";
  return out;
}

}  // namespace depord
