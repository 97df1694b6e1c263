#include "depord/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "depord/reduce.hpp"

namespace depord {
namespace {

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw InputError("bad number in phi spec: '" + std::string(s) + "'");
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  if (s.empty()) return out;
  while (true) {
    const auto pos = s.find(';');
    out.push_back(parse_number(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

void require_nondegenerate(const ConditionalModel& m, const char* what) {
  if (m.y().degenerate()) throw DegenerateError(std::string(what) + " undefined for degenerate Y");
}

// P(Y < a_j | cell i): row j-1 of the conditional cdf, zero for j = 0.
double left_cdf(const ConditionalModel& m, Eigen::Index j, Eigen::Index i) {
  return j == 0 ? 0.0 : m.cond_cdf()(j - 1, i);
}

double left_marginal(const ConditionalModel& m, Eigen::Index j) {
  return j == 0 ? 0.0 : m.y().cdf_values()(j - 1);
}

double weighted_variance(const Eigen::VectorXd& w, const Eigen::VectorXd& x) {
  const double mean = w.dot(x);
  return w.dot((x.array() - mean).square().matrix());
}

// Checkerboard copula: corner values C(u_k, j/m) and bilinear interpolation.
class Checkerboard {
 public:
  Checkerboard(const Eigen::VectorXd& u_breaks, const Eigen::MatrixXd& G) : u_(u_breaks) {
    m_ = G.rows();
    const auto n = G.cols();
    corners_ = Eigen::MatrixXd::Zero(n + 1, m_ + 1);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double w = u_(k + 1) - u_(k);
      for (Eigen::Index j = 1; j <= m_; ++j) corners_(k + 1, j) = corners_(k, j) + w * G(j - 1, k);
    }
  }

  const Eigen::MatrixXd& corners() const { return corners_; }
  Eigen::Index levels() const { return m_; }
  const Eigen::VectorXd& u() const { return u_; }

  double operator()(double u, double v) const {
    const auto n = u_.size() - 1;
    auto k = static_cast<Eigen::Index>(std::upper_bound(u_.data(), u_.data() + u_.size(), u) - u_.data()) - 1;
    k = std::clamp<Eigen::Index>(k, 0, n - 1);
    const double vs = std::clamp(v, 0.0, 1.0) * static_cast<double>(m_);
    auto j = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(vs)), 0, m_ - 1);
    const double s = (std::clamp(u, 0.0, 1.0) - u_(k)) / (u_(k + 1) - u_(k));
    const double t = vs - static_cast<double>(j);
    return (1 - s) * (1 - t) * corners_(k, j) + s * (1 - t) * corners_(k + 1, j) + (1 - s) * t * corners_(k, j + 1) +
           s * t * corners_(k + 1, j + 1);
  }

 private:
  Eigen::VectorXd u_;
  Eigen::Index m_ = 0;
  Eigen::MatrixXd corners_;
};

// Simpson's rule on each piece between sorted breaks; exact for piecewise quadratics.
template <typename F>
double piecewise_simpson(std::vector<double> breaks, F f) {
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double a = breaks[i - 1];
    const double b = breaks[i];
    if (b - a <= 0.0) continue;
    total += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// PhiSpec

PhiSpec PhiSpec::square() { return {}; }

PhiSpec PhiSpec::abs() {
  PhiSpec p;
  p.kind_ = Kind::Abs;
  p.exponent_ = 1.0;
  return p;
}

PhiSpec PhiSpec::power(double k) {
  if (!(k >= 1.0) || !std::isfinite(k)) throw InputError("power phi needs exponent k >= 1");
  PhiSpec p;
  p.kind_ = Kind::Power;
  p.exponent_ = k;
  return p;
}

PhiSpec PhiSpec::piecewise_linear(std::vector<double> breaks, std::vector<double> slopes) {
  if (slopes.size() != breaks.size() + 1) throw InputError("piecewise-linear phi needs one more slope than breaks");
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (!(breaks[i] > -1.0 && breaks[i] < 1.0)) throw InputError("phi breaks must lie in (-1, 1)");
    if (i > 0 && !(breaks[i] > breaks[i - 1])) throw InputError("phi breaks must be strictly increasing");
  }
  for (std::size_t i = 1; i < slopes.size(); ++i)
    if (slopes[i] < slopes[i - 1]) throw InputError("phi slopes must be nondecreasing (convexity)");
  PhiSpec p;
  p.kind_ = Kind::PiecewiseLinear;
  p.exponent_ = 1.0;
  p.breaks_ = std::move(breaks);
  p.slopes_ = std::move(slopes);
  return p;
}

PhiSpec PhiSpec::parse(std::string_view text) {
  if (text == "square") return square();
  if (text == "abs") return abs();
  if (text.starts_with("power:")) return power(parse_number(text.substr(6)));
  if (text.starts_with("pl:")) {
    const auto body = text.substr(3);
    const auto bar = body.find('|');
    if (bar == std::string_view::npos) throw InputError("piecewise-linear phi must look like pl:breaks|slopes");
    return piecewise_linear(parse_list(body.substr(0, bar)), parse_list(body.substr(bar + 1)));
  }
  throw InputError("unknown phi '" + std::string(text) + "' (square, abs, power:K, pl:b;..|s;..)");
}

double PhiSpec::operator()(double t) const {
  switch (kind_) {
    case Kind::Square:
      return t * t;
    case Kind::Abs:
      return std::abs(t);
    case Kind::Power:
      return std::pow(std::abs(t), exponent_);
    case Kind::PiecewiseLinear: {
      // int_lo^hi of the slope function, lo <= hi.
      const auto integrate = [this](double lo, double hi) {
        double acc = 0.0;
        const auto regions = slopes_.size();
        for (std::size_t r = 0; r < regions; ++r) {
          const double a = r == 0 ? -std::numeric_limits<double>::infinity() : breaks_[r - 1];
          const double b = r + 1 == regions ? std::numeric_limits<double>::infinity() : breaks_[r];
          const double len = std::min(hi, b) - std::max(lo, a);
          if (len > 0.0) acc += slopes_[r] * len;
        }
        return acc;
      };
      return t >= 0.0 ? integrate(0.0, t) : -integrate(t, 0.0);
    }
  }
  return 0.0;
}

bool PhiSpec::strictly_convex_at_zero() const {
  if (kind_ != Kind::PiecewiseLinear) return true;
  for (std::size_t i = 0; i < breaks_.size(); ++i)
    if (breaks_[i] == 0.0 && slopes_[i + 1] > slopes_[i]) return true;
  return false;
}

bool PhiSpec::strictly_convex() const {
  return kind_ == Kind::Square || (kind_ == Kind::Power && exponent_ > 1.0);
}

std::string PhiSpec::name() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Square:
      return "square";
    case Kind::Abs:
      return "abs";
    case Kind::Power:
      out << "power:" << exponent_;
      return out.str();
    case Kind::PiecewiseLinear:
      out << "pl:";
      for (std::size_t i = 0; i < breaks_.size(); ++i) out << (i ? ";" : "") << breaks_[i];
      out << "|";
      for (std::size_t i = 0; i < slopes_.size(); ++i) out << (i ? ";" : "") << slopes_[i];
      return out.str();
  }
  return {};
}

// ---------------------------------------------------------------------------
// Measures

double chatterjee_xi(const ConditionalModel& m) {
  require_nondegenerate(m, "xi");
  const auto& p = m.y().probs();
  const auto& w = m.cell_weights();
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index j = 1; j < m.levels(); ++j) {
    const Eigen::VectorXd surv = (1.0 - m.cond_cdf().row(j - 1).array()).transpose();
    const double s = 1.0 - m.y().cdf_values()(j - 1);
    num += p(j) * weighted_variance(w, surv);
    den += p(j) * s * (1.0 - s);
  }
  return std::clamp(num / den, 0.0, 1.0);
}

double xi_phi(const ConditionalModel& m, const PhiSpec& phi) {
  require_nondegenerate(m, "xi_phi");
  const auto& p = m.y().probs();
  const auto& w = m.cell_weights();
  const auto levels = m.levels();
  double num = 0.0;
  double alpha = 0.0;
  for (Eigen::Index j = 0; j < levels; ++j) {
    const double fy = left_marginal(m, j);
    double inner = 0.0;
    for (Eigen::Index i = 0; i < m.cells(); ++i) inner += w(i) * phi(left_cdf(m, j, i) - fy);
    num += p(j) * inner;
    double norm = 0.0;
    for (Eigen::Index l = 0; l < levels; ++l) norm += p(l) * phi((l < j ? 1.0 : 0.0) - fy);
    alpha += p(j) * norm;
  }
  if (alpha <= kDefaultTol) throw DegenerateError("xi_phi normaliser vanishes for this phi and Y law");
  return num / alpha;
}

double lambda_phi(const ConditionalModel& m, const PhiSpec& phi) {
  require_nondegenerate(m, "lambda_phi");
  const auto& p = m.y().probs();
  const auto& w = m.cell_weights();
  const auto levels = m.levels();
  double num = 0.0;
  double beta = 0.0;
  for (Eigen::Index j = 0; j < levels; ++j) {
    double inner = 0.0;
    for (Eigen::Index i = 0; i < m.cells(); ++i)
      for (Eigen::Index k = 0; k < m.cells(); ++k)
        inner += w(i) * w(k) * phi(left_cdf(m, j, i) - left_cdf(m, j, k));
    num += p(j) * inner;
    double norm = 0.0;
    for (Eigen::Index l1 = 0; l1 < levels; ++l1)
      for (Eigen::Index l2 = 0; l2 < levels; ++l2)
        norm += p(l1) * p(l2) * phi((l1 < j ? 1.0 : 0.0) - (l2 < j ? 1.0 : 0.0));
    beta += p(j) * norm;
  }
  if (beta <= kDefaultTol) throw DegenerateError("lambda_phi normaliser vanishes for this phi and Y law");
  return num / beta;
}

double integrated_r2_nu(const ConditionalModel& m) {
  require_nondegenerate(m, "nu");
  const auto& p = m.y().probs();
  const auto& w = m.cell_weights();
  const auto last = m.levels() - 1;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < last; ++j) {
    const double c = m.y().cdf_values()(j);
    acc += p(j) * weighted_variance(w, m.cond_cdf().row(j).transpose()) / (c * (1.0 - c));
  }
  return std::clamp(acc / (1.0 - p(last)), 0.0, 1.0);
}

double checkerboard_measure(const Eigen::VectorXd& u_breaks, const Eigen::MatrixXd& G, RearrangedKind kind) {
  const Checkerboard cb(u_breaks, G);
  const auto& c = cb.corners();
  const auto m = cb.levels();
  const auto n = u_breaks.size() - 1;
  const auto corner_mean = [&](Eigen::Index k, Eigen::Index j) {
    return 0.25 * (c(k, j) + c(k + 1, j) + c(k, j + 1) + c(k + 1, j + 1));
  };
  switch (kind) {
    case RearrangedKind::SpearmanRho: {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index j = 0; j < m; ++j) acc += (u_breaks(k + 1) - u_breaks(k)) * corner_mean(k, j);
      return 12.0 * acc / static_cast<double>(m) - 3.0;
    }
    case RearrangedKind::KendallTau: {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index j = 0; j < m; ++j) {
          const double mass = c(k + 1, j + 1) - c(k, j + 1) - c(k + 1, j) + c(k, j);
          acc += mass * corner_mean(k, j);
        }
      return 4.0 * acc - 1.0;
    }
    case RearrangedKind::GiniGamma: {
      std::vector<double> diag(u_breaks.data(), u_breaks.data() + u_breaks.size());
      std::vector<double> anti = diag;
      for (Eigen::Index j = 0; j <= m; ++j) {
        const double v = static_cast<double>(j) / static_cast<double>(m);
        diag.push_back(v);
        anti.push_back(1.0 - v);
      }
      const double a = piecewise_simpson(anti, [&](double t) { return cb(t, 1.0 - t); });
      const double d = piecewise_simpson(diag, [&](double t) { return t - cb(t, t); });
      return 4.0 * (a - d);
    }
  }
  return 0.0;
}

double rearranged_measure(const ConditionalModel& m, RearrangedKind kind) {
  require_nondegenerate(m, "rearranged measure");
  const auto levels = m.levels();
  const double unit = 1.0 / static_cast<double>(levels);
  if ((m.y().probs().array() - unit).abs().maxCoeff() > kProbSumTol)
    throw InputError("rearranged measures need a Y law with equal atom probabilities (uniformise Y first)");
  const auto grid = reduce_to_si(m);
  // Perfect dependence with the same Y law: G(j, k) = 1{k <= j} on the u-grid k/m.
  Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(levels + 1, 0.0, 1.0);
  Eigen::MatrixXd top(levels, levels);
  for (Eigen::Index j = 0; j < levels; ++j)
    for (Eigen::Index k = 0; k < levels; ++k) top(j, k) = k <= j ? 1.0 : 0.0;
  const double norm = checkerboard_measure(u, top, kind);
  // SI grids lie between independence and the normaliser, so only rounding leaves [0, 1].
  return std::clamp(checkerboard_measure(grid.u_breaks, grid.G, kind) / norm, 0.0, 1.0);
}

}  // namespace depord
